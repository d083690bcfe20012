#include "gaboredge/cli.hpp"

int main(int argc, char** argv) { return gaboredge::cli::run(argc, argv); }
