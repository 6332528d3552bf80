#include "somnotherm/cli.hpp"

int main(int argc, char** argv) { return somnotherm::cli::run(argc, argv); }
