#include <iostream>
#include <string>
#include <vector>

#include "wordent/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return wordent::cli::run(args, std::cout, std::cerr);
}
