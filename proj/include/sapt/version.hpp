#pragma once

namespace sapt {

inline constexpr const char* kToolName = "sapt";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace sapt
