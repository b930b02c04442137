#include "sobtrace/cli.hpp"

int main(int argc, char** argv) { return sobtrace::cli::main(argc, argv); }
