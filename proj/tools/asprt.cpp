#include "cli.hpp"

int main(int argc, char** argv) { return asprt::cli::cli_main(argc, argv); }
