#include "banditlab/cli/commands.hpp"

int main(int argc, char** argv) { return banditlab::cli::dispatch(argc, argv); }
