#include <iostream>

#include "confound/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return confound::cli::run(args, std::cout, std::cerr);
}
