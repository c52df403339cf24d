#include "vesselkit/cli.hpp"

int main(int argc, char** argv) { return vesselkit::cli::run(argc, argv); }
