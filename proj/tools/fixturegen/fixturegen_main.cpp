#include "fixturegen.hpp"

#include <iostream>

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: fixturegen <output-dir>\n";
        return 1;
    }
    try {
        sortforge::fixtures::write_fixture_set(argv[1]);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    std::cout << "fixture set written to " << argv[1] << "\n";
    return 0;
}
