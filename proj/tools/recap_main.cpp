#include <unistd.h>

#include <cstdlib>
#include <iostream>

#include "recap/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  recap::cli::Options options;
  options.color = std::getenv("RECAP_NO_COLOR") == nullptr && ::isatty(STDERR_FILENO);
  return recap::cli::run(args, std::cout, std::cerr, options);
}
