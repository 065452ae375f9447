#pragma once

namespace gplab {

inline constexpr const char* kVersion = "0.1.0";

} // namespace gplab
