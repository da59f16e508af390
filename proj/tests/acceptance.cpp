// Acceptance gate: one PASS/FAIL line per criterion.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "frontlab/verify.hpp"

int main(int argc, char** argv) {
    int only = 0;
    std::uint64_t seed = 20240601;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
        else if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) seed = std::strtoull(argv[++i], nullptr, 10);
        else {
            std::fprintf(stderr, "usage: acceptance [--only N] [--seed S]\n");
            return 2;
        }
    }
    int failed = 0;
    for (int id = 1; id <= 12; ++id) {
        if (only && id != only) continue;
        auto r = frontlab::run_criterion(id, seed);
        std::printf("criterion %d: %s | %s | %s | %.1f s\n", id, r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str(), r.seconds);
        std::fflush(stdout);
        failed += !r.passed;
    }
    return failed ? 1 : 0;
}
