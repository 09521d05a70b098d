#include <iostream>

#include "fakemu_cli/cli.hpp"

int main(int argc, char** argv) { return fakemu::cli::run_cli(argc, argv, std::cout, std::cerr); }
