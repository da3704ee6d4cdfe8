#include <iostream>

#include "tockcheck/cli.hpp"

int main(int argc, char** argv) { return tockcheck::cli_main(argc, argv, std::cout, std::cerr); }
