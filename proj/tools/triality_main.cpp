#include "triality/cli.hpp"

int main(int argc, char** argv) { return triality::cli::run(argc, argv); }
