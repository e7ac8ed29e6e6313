#include <iostream>
#include <string>
#include <vector>

#include "gtcm/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gtcm::cli::run(std::move(args), std::cout, std::cerr);
}
