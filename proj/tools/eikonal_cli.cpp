#include <iostream>

#include "eikonal/cli.hpp"

int main(int argc, char** argv) { return eik::cli::run(argc, argv, std::cout, std::cerr); }
