#include <iostream>

#include "torusperc_cli/cli.hpp"

int main(int argc, char** argv) {
  return torusperc::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
