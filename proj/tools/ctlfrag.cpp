#include <iostream>
#include <string>
#include <vector>

#include "ctlfrag/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ctlfrag::cli::run(std::move(args), std::cout, std::cerr);
}
