#include "etsmc/cli.hpp"

int main(int argc, char** argv) { return etsmc::cli_main(argc, argv); }
