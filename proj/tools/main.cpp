#include <string>
#include <vector>

#include "motionsync/cli.hpp"

int main(int argc, char** argv) {
    return motionsync::run(std::vector<std::string>(argv + 1, argv + argc));
}
