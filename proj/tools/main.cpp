#include <iostream>
#include <string>
#include <vector>

#include "fakenews/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fakenews::cli::run(args, std::cout, std::cerr);
}
