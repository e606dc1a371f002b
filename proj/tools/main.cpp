#include "mgkan/cli.hpp"

int main(int argc, char** argv) { return mgkan::cli::run(argc, argv); }
