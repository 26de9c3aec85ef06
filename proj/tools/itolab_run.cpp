#include "itolab/cli/run.hpp"

int main(int argc, char** argv) { return itolab::cli::main_entry(argc, argv); }
