#include <iostream>
#include <string>
#include <vector>

#include "zigzag/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return zz::run_cli(args, std::cout, std::cerr);
}
