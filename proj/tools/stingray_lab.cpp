#include "stingray/cli.hpp"

int main(int argc, char** argv) { return stingray::cli_main(argc, argv); }
