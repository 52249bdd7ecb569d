#pragma once

namespace banachlab {
inline constexpr const char* kVersion = "0.1.0";
}
