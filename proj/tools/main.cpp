#include "relgeo/cli.hpp"

int main(int argc, char** argv) { return relgeo::cli::run_cli(argc, argv); }
