#include "hrlnav/cli.hpp"

int main(int argc, char** argv) { return hrlnav::cli::run_cli(argc, argv); }
