#include <iostream>

#include "cleandec/cli.hpp"

int main(int argc, char** argv) { return cleandec::run_command(argc, argv, std::cout, std::cerr); }
