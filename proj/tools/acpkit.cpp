#include <iostream>
#include <string>
#include <vector>

#include "acpkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return acp::cli::run(args, std::cout, std::cerr);
}
