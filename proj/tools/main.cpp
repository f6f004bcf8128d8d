#include "hawkes/cli.hpp"

int main(int argc, char** argv) { return hawkes::run_cli(argc, argv); }
