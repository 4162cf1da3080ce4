#include <iostream>
#include <locale>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::locale::global(std::locale::classic());
  std::vector<std::string> args(argv + 1, argv + argc);
  return hqmm::cli::run_command(args, std::cout, std::cerr);
}
