#include "bodefrac/cli.hpp"

int main(int argc, char** argv) { return bodefrac::run_cli(argc, argv); }
