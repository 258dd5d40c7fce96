#include <iostream>
#include <string>
#include <vector>

#include "lattice_ist/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lattice_ist::run_cli(args, std::cin, std::cout, std::cerr);
}
