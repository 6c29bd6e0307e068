#include "loja/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return loja::main_entry(argc, argv, std::cin, std::cout, std::cerr); }
