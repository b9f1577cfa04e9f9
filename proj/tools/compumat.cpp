#include <iostream>

#include "compumat/cli.hpp"

int main(int argc, char** argv) { return compumat::run_cli(argc, argv, std::cout, std::cerr); }
