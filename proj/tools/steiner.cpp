#include "cli.hpp"

int main(int argc, char** argv)
{
    return steiner::cli::run(argc, argv, std::cout, std::cerr);
}
