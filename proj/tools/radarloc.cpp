#include <iostream>

#include "radarloc/app/commands.hpp"

int main(int argc, char** argv) {
  return radarloc::app::run_cli(argc, argv, std::cout, std::cerr);
}
