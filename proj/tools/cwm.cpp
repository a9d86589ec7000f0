#include <iostream>

#include "cwm/cli.hpp"

int main(int argc, char** argv) { return cwm::cli::run_cli(argc, argv, std::cout, std::cerr); }
