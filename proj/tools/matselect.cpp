#include "matsel/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return matsel::cli::run(argc, argv, std::cout, std::cerr); }
