#include "dlfm/cli.hpp"

int main(int argc, char** argv) { return dlfm::cli::run(argc, argv); }
