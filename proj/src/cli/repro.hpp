#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace troptree::cli {

struct ReproCase {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Recomputes the worked examples (trees, segments, permutations, counts,
/// compatibility sets) and compares them with their known values.
std::vector<ReproCase> run_repro();

void print_repro_table(const std::vector<ReproCase>& cases, std::ostream& out);

}  // namespace troptree::cli
