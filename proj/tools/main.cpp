#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return nucleus::cli::run(argc, argv, std::cerr);
}
