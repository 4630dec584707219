#include "bohm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bohm::run_cli(argc, argv, std::cout, std::cerr); }
