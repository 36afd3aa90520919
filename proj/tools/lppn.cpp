#include <iostream>

#include "lppn/cli.hpp"

int main(int argc, char** argv)
{
    return lppn::cli_main(argc, argv, std::cout, std::cerr);
}
