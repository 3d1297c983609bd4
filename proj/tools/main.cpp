#include "l1net/cli.hpp"

int main(int argc, char** argv) { return l1net::cli_main(argc, argv); }
