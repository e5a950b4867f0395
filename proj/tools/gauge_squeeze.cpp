#include "gauge_squeeze/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return gauge_squeeze::run_cli(argc, argv, std::cout, std::cerr);
}
