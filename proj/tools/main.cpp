#include <iostream>

#include "credal/cli.hpp"

int main(int argc, char** argv) {
    return credal::cli_main(argc, argv, std::cout, std::cerr);
}
