#include "scatter1d/cli.hpp"

int main(int argc, char** argv) { return scatter1d::cli::run(argc, argv); }
