#include <iostream>

#include "vocalscreen/cli.hpp"

int main(int argc, char** argv) { return vocalscreen::cli::run(argc, argv, std::cout, std::cerr); }
