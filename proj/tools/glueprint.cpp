#include <iostream>
#include <string>
#include <vector>

#include "glueprint/cli_io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return glueprint::io::run(args, std::cout, std::cerr);
}
