#include <iostream>

#include "cli.hpp"

int main(int argc, char **argv)
{
    return nullgauge::cli::run(argc, argv, std::cout, std::cerr);
}
