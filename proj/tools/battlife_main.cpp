#include "commands.hpp"

int main(int argc, char** argv) { return battlife::cli::run(argc, argv); }
