// Acceptance suite: one pass/fail line per criterion, exit nonzero if any
// criterion fails.  Criteria 7-9 and 14 share the experiment runs.
#include <cstring>
#include <iostream>
#include <string>

int run_acceptance(const std::string& golden_dir, const std::string& work_dir);

int main(int argc, char** argv) {
    std::string golden_dir = "tests/golden";
    std::string work_dir = "acceptance_out";
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::strcmp(argv[i], "--golden-dir") == 0) golden_dir = argv[i + 1];
        if (std::strcmp(argv[i], "--work-dir") == 0) work_dir = argv[i + 1];
    }
    return run_acceptance(golden_dir, work_dir);
}

// The criterion implementations live in acceptance_criteria.cpp.
