#include <iostream>
#include <string>
#include <vector>

#include "prioritizer/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return prioritizer::cli::run(args, std::cout, std::cerr);
}
