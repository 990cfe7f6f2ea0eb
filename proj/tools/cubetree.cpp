#include <iostream>

#include "cubetree/cli.hpp"

int main(int argc, char** argv) { return cubetree::cli::run(argc, argv, std::cout, std::cerr); }
