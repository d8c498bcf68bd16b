#include "lapgraph/cli.hpp"

int main(int argc, char** argv) { return lapgraph::cli::main_entry(argc, argv); }
