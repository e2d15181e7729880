#include "bundlecurv/cli.hpp"

int main(int argc, char** argv) { return bundlecurv::cli::main(argc, argv); }
