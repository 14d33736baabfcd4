#include "spanforge/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return spanforge::run_cli(argc, argv, std::cout, std::cerr);
}
