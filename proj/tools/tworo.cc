#include <iostream>

#include "tworo/cli.h"

int main(int argc, char** argv) {
  return tworo::cli::Run(argc, argv, std::cout, std::cerr);
}
