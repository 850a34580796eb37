#pragma once

namespace topocov {

inline constexpr const char* version = "0.1.0";

} // namespace topocov
