#include <iostream>

#include "tnlab/cli.hpp"

int main(int argc, char** argv) {
  return tnlab::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
