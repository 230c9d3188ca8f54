#include <iostream>
#include <string>
#include <vector>

#include "linseg/cli.hpp"

int main(int argc, char** argv) {
  return linseg::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
