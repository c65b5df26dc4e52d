#include "nslab/cli.hpp"

int main(int argc, char** argv) { return nslab::cli_main(argc, argv); }
