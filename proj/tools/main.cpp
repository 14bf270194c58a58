#include "losnlos/cli.hpp"

int main(int argc, char** argv) { return losnlos::cli::run(argc, argv); }
