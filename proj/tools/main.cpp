#include "rittcalc/cli.hpp"

int main(int argc, char** argv) { return rittcalc::cli::run(argc, argv); }
