// Prints one line per acceptance criterion; exit status 1 if any fails.
#include "opcalc/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    opcalc::acceptance::Options opts;
    for (int i = 1; i < argc; ++i) opts.only.push_back(std::stoi(argv[i]));
    bool ok = true;
    for (const auto& r : opcalc::acceptance::run(opts)) {
        std::cout << opcalc::acceptance::format_line(r) << std::endl;
        ok = ok && r.passed;
    }
    return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
