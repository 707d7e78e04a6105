#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return lfe::run(argc, argv, std::cout, std::cerr); }
