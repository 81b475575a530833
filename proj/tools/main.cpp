#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mocp::cli::main(argc, argv, std::cout, std::cerr); }
