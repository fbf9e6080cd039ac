#pragma once

namespace gsum {

inline constexpr const char* version = "0.1.0";

}  // namespace gsum
