#include "cmvsub/cli.hpp"

int main(int argc, char** argv) { return cmvsub::cli::run(argc, argv); }
