#include "lohe/app/experiment.hpp"

int main(int argc, char** argv) { return lohe::app::run_cli(argc, argv); }
