#include <iostream>

#include "tbl/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tbl::run_cli(args, std::cout, std::cerr);
}
