#include <iostream>
#include <string>
#include <vector>

#include "subac/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return subac::run(args, std::cout, std::cerr);
}
