#include "kacpoly/cli.hpp"

int main(int argc, char** argv) { return kacpoly::dispatch(argc, argv); }
