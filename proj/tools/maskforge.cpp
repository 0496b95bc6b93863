#include <iostream>
#include <string>
#include <vector>

#include "maskforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return maskforge::cli::run(args, std::cout, std::cerr);
}
