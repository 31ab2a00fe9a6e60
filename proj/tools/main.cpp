#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qmeas::cli::parse_and_run(args, qmeas::cli::Environment::from_process(), std::cout, std::cerr);
}
