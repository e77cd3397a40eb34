#include <iostream>

#include "formalign/demo/cli.hpp"

int main(int argc, char** argv) {
  return formalign::demo::run_cli(argc, argv, std::cout, std::cerr);
}
