#include <iostream>

#include "faw/cli.hpp"

int main(int argc, char** argv) { return faw::cli::run(argc, argv, std::cout, std::cerr); }
