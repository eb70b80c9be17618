#include "infharm/cli.hpp"

int main(int argc, char** argv) { return infharm::run(argc, argv); }
