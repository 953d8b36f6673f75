#pragma once

namespace arcpoly {

inline constexpr const char* version = "0.1.0";

} // namespace arcpoly
