#pragma once

namespace normlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace normlab
