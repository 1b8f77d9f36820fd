#include <iostream>

#include "varbound/cli.hpp"

int main(int argc, char** argv) {
  return varbound::cli::main(argc, argv, std::cout, std::cerr);
}
