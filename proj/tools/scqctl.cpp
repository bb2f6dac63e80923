#include <iostream>

#include "scq/cli.hpp"

int main(int argc, char** argv) { return scq::cli::main(argc, argv, std::cout, std::cerr); }
