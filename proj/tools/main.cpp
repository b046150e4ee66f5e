#include <iostream>

#include "qrng/cli.hpp"

int main(int argc, char** argv) { return qrng::run_cli(argc, argv, std::cout, std::cerr); }
