#include <sandglass/cli.hpp>

#include <iostream>

int main(int argc, char **argv) {
    return sandglass::cli_dispatch(argc, argv, std::cout, std::cerr);
}
