#include "solenoid/cli.hpp"

int main(int argc, char** argv) { return solenoid::cli::main(argc, argv); }
