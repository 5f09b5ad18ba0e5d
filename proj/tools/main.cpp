#include <c2chain/cli.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return c2chain::RunCli(args, std::cout, std::cerr);
}
