#include "thermovalue/cli.hpp"

int main(int argc, char** argv) { return thermovalue::cli::run(argc, argv); }
