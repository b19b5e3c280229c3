#include "imc/io.hpp"

int main(int argc, char** argv) { return imc::run_command(argc, argv); }
