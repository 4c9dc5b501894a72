#pragma once

namespace nhbell {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nhbell
