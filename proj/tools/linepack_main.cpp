#include <iostream>

#include "linepack/cli.hpp"

int main(int argc, char** argv) {
  return linepack::cli::run(argc, argv, std::cout, std::cerr);
}
