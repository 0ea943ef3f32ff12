#include <iostream>
#include <string>
#include <vector>

#include "gscsat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gscsat::run_cli(args, std::cout, std::cerr);
}
