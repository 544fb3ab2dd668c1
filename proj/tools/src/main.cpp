#include <iostream>

#include "numrad_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return numrad::cli::run_cli(args, std::cout, std::cerr);
}
