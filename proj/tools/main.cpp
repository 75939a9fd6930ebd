#include "cli.hpp"

int main(int argc, char** argv) { return imbboost::cli::run(argc, argv); }
