#include "leafmatch/cli.hpp"

int main(int argc, char** argv) { return leafmatch::cli::run(argc, argv); }
