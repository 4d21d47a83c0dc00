#include "cli/commands.hpp"

int main(int argc, char** argv) { return fracschrod::cli::run_cli(argc, argv); }
