#include <string>
#include <vector>

#include "qdist/io.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qdist::cli::run(args);
}
