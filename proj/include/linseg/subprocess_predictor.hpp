#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <string>

#include "linseg/pipeline.hpp"
#include "linseg/png_io.hpp"

namespace linseg {

// External predictor speaking PNG over standard streams.
//
// per_patch: one process per window. The harness writes the patch as an
//   8-bit grayscale PNG (ink = 255) to the child's stdin, closes it, and
//   reads one mask PNG (8-bit grayscale, >= 128 = line) from its stdout.
//   The child must exit with status 0.
// streaming: one long-lived process. Every request and every reply is a
//   frame: 4-byte big-endian payload length followed by that many PNG bytes.
//   The harness closes stdin when done; replies must come in request order.
//   Streaming predictors are called serially.
enum class SubprocessMode { per_patch, streaming };

class SubprocessPredictor final : public Predictor {
 public:
  SubprocessPredictor(std::string command, SubprocessMode mode);
  ~SubprocessPredictor() override;

  PredictorOutput predict(const BinaryRaster& patch, WindowOrigin origin) const override;
  bool concurrent() const override { return mode_ == SubprocessMode::per_patch; }

 private:
  struct Stream;

  std::string command_;
  SubprocessMode mode_;
  mutable std::mutex mutex_;
  mutable std::unique_ptr<Stream> stream_;
};

// Runs `/bin/sh -c command`, feeds `input` to its stdin and returns its
// stdout. Throws IoError if the process cannot be started or exits with a
// non-zero status.
Bytes run_filter(const std::string& command, std::span<const std::uint8_t> input);

}  // namespace linseg
