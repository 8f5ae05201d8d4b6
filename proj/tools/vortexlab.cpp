#include "vortexlab/cli.hpp"

int main(int argc, char** argv) { return vortexlab::run_cli(argc, argv); }
