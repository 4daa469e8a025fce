#include "tcheb/cli.hpp"

int main(int argc, char** argv) { return tcheb::cli_main(argc, argv); }
