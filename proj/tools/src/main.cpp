#include "qdev/cli/app.hpp"

int main(int argc, char** argv) { return qdev::cli::run(argc, argv); }
