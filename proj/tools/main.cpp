#include <iostream>
#include <string>
#include <vector>

#include "conenav/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) {
        conenav::cli_main({"--help"}, std::cerr, std::cerr);
        return 1;
    }
    return conenav::cli_main(args, std::cout, std::cerr);
}
