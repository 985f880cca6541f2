#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return hkout::cli::dispatch(argc, argv, std::cout, std::cerr);
}
