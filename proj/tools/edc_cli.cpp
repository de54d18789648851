#include <iostream>

#include "edc/cli.hpp"

int main(int argc, char** argv) { return edc::cli::cli_main(argc, argv, std::cout, std::cerr); }
