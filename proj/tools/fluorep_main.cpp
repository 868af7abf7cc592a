#include "fluorep/cli.hpp"

int main(int argc, char** argv) { return fluorep::run_cli(argc, argv); }
