#include "mobgossip/cli.hpp"

int main(int argc, char** argv) {
    return mobgossip::cli_main(argc, argv);
}
