#include "fockbench/cli.hpp"

int main(int argc, char** argv) { return fockbench::run_cli(argc, argv); }
