#include "catfish/cli.hpp"

int main(int argc, char** argv) { return catfish::cli::run(argc, argv); }
