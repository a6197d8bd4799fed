#include <iostream>

#include "renewal/cli.hpp"

int main(int argc, char** argv) { return renewal::run_cli(argc, argv, std::cout, std::cerr); }
