#include <iostream>

#include "hypiso/cli.hpp"

int main(int argc, char** argv) { return hypiso::cli::run(argc, argv, std::cout, std::cerr); }
