#include <iostream>

#include "suplab/cli.hpp"

int main(int argc, char** argv) { return suplab::cli::run(argc, argv, std::cout, std::cerr); }
