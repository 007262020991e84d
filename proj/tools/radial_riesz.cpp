#include <radial_riesz/cli.hpp>

int main(int argc, char** argv) { return radial_riesz::cli::run_cli(argc, argv); }
