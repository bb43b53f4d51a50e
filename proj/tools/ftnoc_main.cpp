#include <iostream>

#include "noc/cli.hpp"

int main(int argc, char** argv) {
  return noc::run_cli(argc, argv, std::cout, std::cerr);
}
