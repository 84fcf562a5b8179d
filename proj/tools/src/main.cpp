#include <iostream>

#include "cover_cli/cli.hpp"

int main(int argc, char** argv) { return cover_cli::run(argc, argv, std::cout, std::cerr); }
