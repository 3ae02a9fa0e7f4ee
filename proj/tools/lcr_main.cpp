#include "lcr/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lcr::cli_main(argc, argv, std::cout, std::cerr); }
