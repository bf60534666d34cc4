#include <iostream>

#include "bdelta/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bdelta::cli::run(args, std::cout, std::cerr, bdelta::cli::environment_from_process());
}
