#include "cli_app.hpp"

int main(int argc, char** argv) { return glaa::cli::run_cli(argc, argv); }
