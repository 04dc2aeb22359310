#pragma once

namespace pflin {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pflin
