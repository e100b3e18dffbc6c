#include <iostream>

#include "rumin/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rumin::run_cli(args, std::cout, std::cerr);
}
