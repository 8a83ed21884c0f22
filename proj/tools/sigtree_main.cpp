#include <iostream>

#include "sigtree/cli.hpp"

int main(int argc, char** argv) { return sigtree::cli::run(argc, argv, std::cout, std::cerr); }
