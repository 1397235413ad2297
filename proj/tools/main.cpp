#include <iostream>

#include "sabroots/cli_app.hpp"

int main(int argc, char** argv) { return sabroots::cli::run_app(argc, argv, std::cout, std::cerr); }
