#include <iostream>

#include "digitsvm/cli.hpp"

int main(int argc, char** argv) { return digitsvm::run_cli(argc, argv, std::cout, std::cerr); }
