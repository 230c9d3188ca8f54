#include "linseg/subprocess_predictor.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <exception>
#include <thread>

namespace linseg {
namespace {

[[noreturn]] void fail(const std::string& what) {
  throw IoError(what + ": " + std::strerror(errno));
}

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    reset();
    fd_ = std::exchange(o.fd_, -1);
    return *this;
  }
  ~Fd() { reset(); }

  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

struct Child {
  pid_t pid = -1;
  Fd in;   // write end of the child's stdin
  Fd out;  // read end of the child's stdout
};

Child spawn(const std::string& command) {
  ignore_sigpipe();
  std::array<int, 2> to_child{};
  std::array<int, 2> from_child{};
  if (::pipe2(to_child.data(), O_CLOEXEC) != 0) fail("pipe");
  if (::pipe2(from_child.data(), O_CLOEXEC) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    fail("pipe");
  }
  const pid_t pid = ::fork();
  if (pid < 0) fail("fork");
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  return {pid, Fd(to_child[1]), Fd(from_child[0])};
}

int wait_for(pid_t pid) {
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) fail("waitpid");
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
}

void write_all(int fd, std::span<const std::uint8_t> data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("write to predictor");
    }
    data = data.subspan(static_cast<std::size_t>(n));
  }
}

void read_exact(int fd, std::uint8_t* dst, std::size_t n) {
  while (n > 0) {
    const ssize_t got = ::read(fd, dst, n);
    if (got < 0) {
      if (errno == EINTR) continue;
      fail("read from predictor");
    }
    if (got == 0) throw IoError("predictor closed its output mid-frame");
    dst += got;
    n -= static_cast<std::size_t>(got);
  }
}

}  // namespace

Bytes run_filter(const std::string& command, std::span<const std::uint8_t> input) {
  Child child = spawn(command);
  Bytes output;
  std::array<std::uint8_t, 65536> buffer{};
  std::size_t written = 0;
  if (input.empty()) {
    child.in.reset();
  } else if (::fcntl(child.in.get(), F_SETFL, O_NONBLOCK) != 0) {
    fail("fcntl");
  }

  // Write and read at the same time so neither side blocks on a full pipe.
  while (child.out.get() >= 0) {
    std::array<pollfd, 2> fds{};
    nfds_t count = 0;
    fds[count++] = {child.out.get(), POLLIN, 0};
    if (child.in.get() >= 0) fds[count++] = {child.in.get(), POLLOUT, 0};
    if (::poll(fds.data(), count, -1) < 0) {
      if (errno == EINTR) continue;
      fail("poll");
    }
    if (count == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const ssize_t n = ::write(child.in.get(), input.data() + written, input.size() - written);
      if (n < 0 && errno != EINTR && errno != EAGAIN) {
        child.in.reset();  // child stopped reading; its exit status decides
      } else if (n > 0) {
        written += static_cast<std::size_t>(n);
        if (written == input.size()) child.in.reset();
      }
    }
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      const ssize_t n = ::read(child.out.get(), buffer.data(), buffer.size());
      if (n < 0) {
        if (errno == EINTR) continue;
        fail("read from predictor");
      }
      if (n == 0) {
        child.out.reset();
      } else {
        output.insert(output.end(), buffer.begin(), buffer.begin() + n);
      }
    }
  }
  child.in.reset();
  const int status = wait_for(child.pid);
  if (status != 0) {
    throw IoError("predictor command '" + command + "' exited with status " +
                  std::to_string(status));
  }
  return output;
}

struct SubprocessPredictor::Stream {
  Child child;

  ~Stream() {
    child.in.reset();
    child.out.reset();
    if (child.pid > 0) wait_for(child.pid);
  }
};

SubprocessPredictor::SubprocessPredictor(std::string command, SubprocessMode mode)
    : command_(std::move(command)), mode_(mode) {
  if (command_.empty()) throw ContractError("empty predictor command");
}

SubprocessPredictor::~SubprocessPredictor() = default;

PredictorOutput SubprocessPredictor::predict(const BinaryRaster& patch, WindowOrigin) const {
  const Bytes request = encode_binary_png(patch);
  if (mode_ == SubprocessMode::per_patch) {
    try {
      return decode_binary_png(run_filter(command_, request));
    } catch (const FormatError& e) {
      throw FormatError(std::string("predictor reply: ") + e.what());
    }
  }

  std::lock_guard lock(mutex_);
  if (!stream_) {
    stream_ = std::make_unique<Stream>();
    stream_->child = spawn(command_);
  }
  const auto size = static_cast<std::uint32_t>(request.size());
  const std::array<std::uint8_t, 4> header{
      static_cast<std::uint8_t>(size >> 24), static_cast<std::uint8_t>(size >> 16),
      static_cast<std::uint8_t>(size >> 8), static_cast<std::uint8_t>(size)};
  // A child may start replying before it has consumed the whole request
  // (e.g. an echo filter), so the request is written from a second thread.
  std::exception_ptr write_error;
  Bytes reply;
  {
    std::jthread writer([&] {
      try {
        write_all(stream_->child.in.get(), header);
        write_all(stream_->child.in.get(), request);
      } catch (...) {
        write_error = std::current_exception();
      }
    });
    std::array<std::uint8_t, 4> reply_header{};
    read_exact(stream_->child.out.get(), reply_header.data(), reply_header.size());
    const std::uint32_t reply_size = (std::uint32_t{reply_header[0]} << 24) |
                                     (std::uint32_t{reply_header[1]} << 16) |
                                     (std::uint32_t{reply_header[2]} << 8) | reply_header[3];
    reply.resize(reply_size);
    read_exact(stream_->child.out.get(), reply.data(), reply.size());
  }
  if (write_error) std::rethrow_exception(write_error);
  try {
    return decode_binary_png(reply);
  } catch (const FormatError& e) {
    throw FormatError(std::string("predictor reply: ") + e.what());
  }
}

}  // namespace linseg
