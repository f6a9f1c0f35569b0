#include <iostream>

#include "infodiag/cli.hpp"

int main(int argc, char** argv) { return infodiag::run_cli(argc, argv, std::cout, std::cerr); }
