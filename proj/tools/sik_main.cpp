#include "sik/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return sik::run_cli(argc, argv, std::cout, std::cerr); }
