#include "bergm/cli.hpp"

int main(int argc, char** argv) { return bergm::run_cli(argc, argv); }
