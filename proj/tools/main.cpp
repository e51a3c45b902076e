#include <iostream>

#include "cli_lib.hpp"

int main(int argc, char** argv) {
    return bandsign::cli::run(argc, argv, std::cout, std::cerr);
}
