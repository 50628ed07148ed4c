#pragma once

namespace segeval {

inline constexpr const char* kVersion = "1.0.0";

} // namespace segeval
