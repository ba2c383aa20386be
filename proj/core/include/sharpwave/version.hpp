#pragma once

namespace sharpwave {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sharpwave
