#include <iostream>

#include "phytoken/cli.hpp"

int main(int argc, char** argv) { return phytoken::cli::run(argc, argv, std::cout, std::cerr); }
