#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "troptree/torus.hpp"

namespace troptree::cli {

enum class OutputFormat { Json, Text, Dot };

struct RunConfig {
    double tolerance = kDefaultTol;
    bool normalize = false;
    OutputFormat output_format = OutputFormat::Json;
    std::optional<std::uint64_t> seed;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitInputError = 2;

/// Entry point shared by the executable and the tests. argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace troptree::cli
