#include <iostream>

#include "infgreen/cli.hpp"

int main(int argc, char** argv) { return infgreen::cli::run(argc, argv, std::cout, std::cerr); }
