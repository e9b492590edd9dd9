#include <iostream>

#include "textanchor_cli/cli.hpp"

int main(int argc, char** argv) { return textanchor::cli::run(argc, argv, std::cout, std::cerr); }
