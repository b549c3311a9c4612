#include "owasched/cli.hpp"

int main(int argc, char** argv) { return owasched::cli_main(argc, argv); }
