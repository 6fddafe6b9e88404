#include <iostream>
#include <string>
#include <vector>

#include "theoria/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return theoria::cli::run_main(args, std::cin, std::cout, std::cerr);
}
