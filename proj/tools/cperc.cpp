#include "cperc/cli.hpp"

int main(int argc, char** argv) { return cperc::cli::run(argc, argv); }
