#include <iostream>

#include "warpharm/cli.hpp"

int main(int argc, char** argv) { return warpharm::cli::run(argc, argv, std::cout, std::cerr); }
