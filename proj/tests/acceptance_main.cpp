// Verification suite runner: prints one pass/fail line per criterion and
// exits non-zero on any failure.

#include <cstring>
#include <filesystem>
#include <iostream>

#include "vfield/acceptance.hpp"

int main(int argc, char** argv) {
    vfield::AcceptanceOptions options;
    options.work_dir = std::filesystem::temp_directory_path() / "vfield_acceptance";
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--scale") == 0 && i + 1 < argc) {
            const std::string scale = argv[++i];
            if (scale == "paper") {
                options.scale = vfield::AcceptanceScale::Paper;
            } else if (scale != "desk") {
                std::cerr << "--scale must be desk or paper\n";
                return 2;
            }
        } else if (std::strcmp(argv[i], "--work") == 0 && i + 1 < argc) {
            options.work_dir = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--scale desk|paper] [--work DIR]\n";
            return 2;
        }
    }
    const auto results = vfield::run_acceptance(options, std::cout);
    return vfield::all_passed(results) ? 0 : 1;
}
