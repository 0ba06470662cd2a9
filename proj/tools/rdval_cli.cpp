#include "rdval/cli.hpp"

int main(int argc, char** argv) { return rdval::cli::run(argc, argv); }
