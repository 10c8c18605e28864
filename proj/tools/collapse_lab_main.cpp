#include "collapse/cli.hpp"

int main(int argc, char** argv) { return collapse::cli_main(argc, argv); }
