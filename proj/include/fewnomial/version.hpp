#pragma once

namespace fewnomial {

inline constexpr const char* kToolName = "fewnomial";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

}  // namespace fewnomial
