#include <vector>

#include "sgmix/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sgmix::run_cli(args);
}
