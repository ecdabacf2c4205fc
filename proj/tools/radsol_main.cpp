#include <iostream>

#include "radsol/cli.hpp"

int main(int argc, char** argv)
{
    return radsol::run_cli(argc, argv, std::cout, std::cerr);
}
