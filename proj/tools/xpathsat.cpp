#include <iostream>

#include "xpathsat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return xpathsat::cli::run(args, std::cout, std::cerr);
}
