#include <iostream>

#include "expgrad/cli.hpp"

int main(int argc, char** argv) { return expgrad::cli::main(argc, argv, std::cout, std::cerr); }
