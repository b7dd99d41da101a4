#include "scrambled/cli.h"

int main(int argc, char **argv) {
    return scrambled::cli::run(argc, argv);
}
