#include "run.hpp"

int main(int argc, char** argv) { return glv::cli::main_entry(argc, argv); }
