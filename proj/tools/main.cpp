#include <iostream>

#include "mcomp/cli.hpp"

int main(int argc, char** argv) { return mcomp::run_cli(argc, argv, std::cout, std::cerr); }
