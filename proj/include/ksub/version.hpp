#pragma once

namespace ksub {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ksub
