#pragma once

namespace itolab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace itolab
