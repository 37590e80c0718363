#include <iostream>

#include "smm/cli.hpp"

int main(int argc, char** argv) { return smm::cli::run(argc, argv, std::cout, std::cerr); }
