#include "gvfls/cli.hpp"

int main(int argc, char** argv) { return gvfls::run_cli(argc, argv); }
