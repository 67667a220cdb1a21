#include <iostream>
#include <string>
#include <vector>

#include "chainpool/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chainpool::cli::run(args, std::cout, std::cerr);
}
