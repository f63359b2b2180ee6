#include <iostream>

#include "twoatom/cli/app.hpp"

int main(int argc, char** argv) {
  return twoatom::cli::run(argc, argv, std::cout, std::cerr);
}
