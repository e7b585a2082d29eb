#include "toolforge/cli.hpp"

int main(int argc, char** argv) { return toolforge::cli::run(argc, argv); }
