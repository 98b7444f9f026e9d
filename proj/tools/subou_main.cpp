#include <iostream>

#include "subou/cli/cli.hpp"

int main(int argc, char** argv) { return subou::cli::run(argc, argv, std::cout, std::cerr); }
