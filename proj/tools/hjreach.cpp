#include <iostream>
#include <string>
#include <vector>

#include "hjr/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hjr::run(args, std::cout, std::cerr);
}
