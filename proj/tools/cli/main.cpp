#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) { return sld::cli::run(argc, argv, std::cout, std::cerr); }
