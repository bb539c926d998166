#include <iostream>
#include <string>
#include <vector>

#include "cli/app.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return regsimplex::cli::run(args, std::cin, std::cout, std::cerr);
}
