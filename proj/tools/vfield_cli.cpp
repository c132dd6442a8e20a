#include "vfield/commands.hpp"

int main(int argc, char** argv) { return vfield::run_command(argc, argv); }
