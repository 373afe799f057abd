// Entry point: everything lives in the library so tests can drive the
// command surface in process.

#include <iostream>

#include "qbm/cli.hpp"

int main(int argc, char** argv) { return qbm::run_command(argc, argv, std::cout, std::cerr); }
