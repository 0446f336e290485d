#include "twrc/harness.hpp"

int main(int argc, char** argv) { return twrc::cli_main(argc, argv); }
