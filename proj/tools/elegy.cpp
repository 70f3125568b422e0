#include <iostream>

#include "elegy/cli.hpp"

int main(int argc, char** argv) { return elegy::cli::run(argc, argv, std::cout, std::cerr); }
