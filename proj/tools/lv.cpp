#include "lv_cli.hpp"

int main(int argc, char** argv) { return randlv::cli::dispatch(argc, argv); }
