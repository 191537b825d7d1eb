#include "fkdv/cli.hpp"

int main(int argc, char** argv) { return fkdv::cli::run_cli(argc, argv); }
