#include <clocale>

#include "qht/cli.hpp"

int main(int argc, char** argv) {
    std::setlocale(LC_NUMERIC, "C");
    return qht::cli::run_command(argc, argv);
}
