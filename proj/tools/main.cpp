#include "gpcb/harness.hpp"

int main(int argc, char** argv) { return gpcb::cli_main(argc, argv); }
