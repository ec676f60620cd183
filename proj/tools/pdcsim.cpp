#include <iostream>

#include "pdcsim/cli.hpp"

int main(int argc, char** argv) {
    return pdcsim::cli::main_entry(argc, argv, std::cout, std::cerr);
}
