#include "matdist/cli.hpp"

int main(int argc, char** argv) { return matdist::run_cli(argc, argv); }
