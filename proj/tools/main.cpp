#include <iostream>

#include "blgc_cli/app.hpp"

int main(int argc, char** argv) {
  return blgc::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
