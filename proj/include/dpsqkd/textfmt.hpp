#pragma once

#include <cstdint>
#include <string>

// Locale-independent numeric formatting (std::to_chars under the hood),
// so output artifacts are byte-identical across environments.

namespace dpsqkd {

/// General format with the given number of significant digits.
std::string format_sig(double value, int significant_digits);

/// Shortest representation that round-trips exactly.
std::string format_shortest(double value);

std::string format_u64(std::uint64_t value);

}  // namespace dpsqkd
