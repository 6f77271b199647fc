#include "kec/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return kec::run_cli(argc, argv, std::cout, std::cerr); }
