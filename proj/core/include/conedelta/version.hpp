#pragma once

namespace conedelta {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace conedelta
