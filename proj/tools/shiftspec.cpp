#include "shiftspec/cli.hpp"

int main(int argc, char** argv) { return shiftspec::cli::run(argc, argv); }
