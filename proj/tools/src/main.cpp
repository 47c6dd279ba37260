#include "cmc_cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return cmc::cli::run_cli(argc, argv, std::cout, std::cerr); }
