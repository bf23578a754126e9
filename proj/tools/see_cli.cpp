#include "see/cli/commands.hpp"

int main(int argc, char** argv) { return see::cli::run_command(argc, argv); }
