#include <iostream>

#include "lfdlcq/cli.hpp"

int main(int argc, char** argv) { return lfdlcq::cli::run(argc, argv, std::cout, std::cerr); }
