#include "cli.hpp"

int main(int argc, char** argv) { return qzs::cli::cli_main(argc, argv); }
