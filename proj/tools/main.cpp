#include <iostream>
#include <vector>

#include "sepbell/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sepbell::cli::run(args, std::cout, std::cerr);
}
