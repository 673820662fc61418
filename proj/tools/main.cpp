#include "deepsea/cli.hpp"

int main(int argc, char** argv) { return deepsea::cli_main(argc, argv); }
