#pragma once

namespace sqt {
inline constexpr const char* kVersion = "0.1.0";
}
