#include <iostream>

#include "trimpcr/cli.hpp"

int main(int argc, char** argv) {
  return trimpcr::cli::run(argc, argv, std::cout, std::cerr);
}
