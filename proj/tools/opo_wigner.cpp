#include <iostream>

#include "opo/cli.hpp"

int main(int argc, char** argv) { return opo::cli::run(argc, argv, std::cout, std::cerr); }
