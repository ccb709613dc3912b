#include "lapsim/cli.hpp"

int main(int argc, char** argv) { return lapsim::cli::run(argc, argv); }
