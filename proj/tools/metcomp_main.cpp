#include <iostream>
#include <string>
#include <vector>

#include "metcomp/cli_io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return metcomp::run_command(args, std::cout, std::cerr);
}
