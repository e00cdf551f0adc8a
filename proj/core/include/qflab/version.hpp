#pragma once

namespace qflab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qflab
