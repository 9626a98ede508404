#include <iostream>

#include "oilsent/cli.hpp"

int main(int argc, char** argv) { return oilsent::cli::run_cli(argc, argv, std::cout, std::cerr); }
