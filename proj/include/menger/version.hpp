#pragma once

namespace menger {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace menger
