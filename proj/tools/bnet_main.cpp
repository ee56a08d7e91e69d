#include <iostream>

#include "bnet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return bnet::cli::run(args, std::cout, std::cerr);
}
