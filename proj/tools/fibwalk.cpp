#include "fibwalk/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return fibwalk::cli::run(argc, argv, std::cout, std::cerr); }
