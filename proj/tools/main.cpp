#include <iostream>
#include <string>
#include <vector>

#include "causalbounds/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return causalbounds::cli::run(args, std::cout, std::cerr);
}
