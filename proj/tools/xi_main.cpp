#include <iostream>
#include <string>
#include <vector>

#include "xi/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return xi::cli::run(args, std::cout, std::cerr);
}
