#include "qoscap/cli.hpp"

int main(int argc, char** argv) { return qoscap::cli::run(argc, argv); }
