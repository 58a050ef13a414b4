#pragma once

namespace dpsqkd {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kProjectName = "dpsqkd";

}  // namespace dpsqkd
