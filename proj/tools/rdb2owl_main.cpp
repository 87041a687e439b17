#include <iostream>

#include "rdb2owl/cli.hpp"

int main(int argc, char** argv) {
  return rdb2owl::cli::run(argc, argv, std::cout, std::cerr);
}
