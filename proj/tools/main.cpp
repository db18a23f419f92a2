#include "mgoc/experiments/studies.hpp"

int main(int argc, char** argv) { return mgoc::experiments::cli_main(argc, argv); }
