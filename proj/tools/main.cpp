#include <iostream>

#include "assaylens/cli.hpp"

int main(int argc, char** argv) {
    return assaylens::cli::run(argc, argv, std::cout, std::cerr);
}
