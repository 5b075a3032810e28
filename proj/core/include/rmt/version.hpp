#pragma once

namespace rmt {

inline constexpr const char* kVersion = "rmt 0.1.0";

} // namespace rmt
