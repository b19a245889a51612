#include "imog/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return imog::cli::run(argc, argv, std::cout, std::cerr); }
