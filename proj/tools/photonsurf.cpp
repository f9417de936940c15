#include <iostream>

#include "photonsurf/cli.hpp"

int main(int argc, char** argv) {
    return photonsurf::cli::run_cli(argc, argv, std::cout, std::cerr);
}
