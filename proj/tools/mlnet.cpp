#include <iostream>
#include <string>
#include <vector>

#include "mln/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mln::run_cli(args, std::cout, std::cerr);
}
