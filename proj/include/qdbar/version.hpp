#pragma once

namespace qdbar {
inline constexpr const char* kVersion = "0.1.0";
}
