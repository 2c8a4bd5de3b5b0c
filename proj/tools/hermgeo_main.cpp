#include "hermgeo/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return hermgeo::run_cli(argc, argv, std::cout, std::cerr);
}
