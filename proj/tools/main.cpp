#include <iostream>

#include "soundclust/cli.hpp"

int main(int argc, char** argv) { return soundclust::run_cli(argc, argv, std::cout, std::cerr); }
