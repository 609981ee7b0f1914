#include <iostream>

#include "fracpow/cli.hpp"

int main(int argc, char** argv) {
  return fracpow::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
