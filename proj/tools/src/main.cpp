#include <iostream>

#include "sphsemi/cli.hpp"

int main(int argc, char** argv) { return sphsemi::cli_main(argc, argv, std::cout, std::cerr); }
