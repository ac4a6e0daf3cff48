#include <iostream>

#include "dbagg/cli.hpp"

int main(int argc, char** argv) { return dbagg::run_cli(argc, argv, std::cout, std::cerr); }
