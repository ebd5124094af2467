#include "mpdp/cli.hpp"

int main(int argc, char** argv) { return mpdp::cli_main(argc, argv); }
