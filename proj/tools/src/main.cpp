#include <iostream>

#include "vortstab_cli/cli.hpp"

int main(int argc, char** argv) { return vortstab::cli::main_entry(argc, argv, std::cout, std::cerr); }
