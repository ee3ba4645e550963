#include "chsh/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return chsh::run_cli(argc, argv, std::cout, std::cerr); }
