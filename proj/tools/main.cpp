#include "cli_app.hpp"

int main(int argc, char** argv) { return crasplab::cli::run(argc, argv); }
