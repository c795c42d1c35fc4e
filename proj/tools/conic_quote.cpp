#include "conic/cli.hpp"

int main(int argc, char** argv) { return conic::cli::run(argc, argv); }
