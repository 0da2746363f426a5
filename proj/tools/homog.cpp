#include <iostream>

#include "homog/cli.hpp"

int main(int argc, char** argv) { return homog::cli::run(argc, argv, std::cout, std::cerr); }
