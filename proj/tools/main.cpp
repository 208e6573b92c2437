#include <string>
#include <vector>

#include "heteronet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return heteronet::cli::run(args);
}
