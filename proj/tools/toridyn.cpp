#include "toridyn/cli.hpp"

int main(int argc, char** argv) { return toridyn::cli::run(argc, argv); }
