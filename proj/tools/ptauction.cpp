#include <iostream>
#include <string>
#include <vector>

#include "ptauction/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return ptauction::cli::run(args, std::cout, std::cerr);
}
