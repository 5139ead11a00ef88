#include <iostream>
#include <string>
#include <vector>

#include "cpskit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cpskit::run_cli(args, std::cout, std::cerr);
}
