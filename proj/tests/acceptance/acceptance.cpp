#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "heightforge/repro.hpp"

int main(int argc, char** argv) {
    heightforge::AcceptanceOptions opt;
    opt.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& r : heightforge::run_acceptance(opt, ids)) {
        std::printf("%s  criterion %2d  %-62s %8.2f s  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.seconds, r.detail.c_str());
        std::fflush(stdout);
        if (!r.passed) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
