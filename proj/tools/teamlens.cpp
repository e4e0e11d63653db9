#include "teamlens/cli.hpp"

int main(int argc, char** argv) { return teamlens::cli::run(argc, argv); }
