#pragma once

namespace spanforge {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spanforge
