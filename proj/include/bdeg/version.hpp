#pragma once

namespace bdeg {

inline constexpr const char* version = "0.1.0";

} // namespace bdeg
