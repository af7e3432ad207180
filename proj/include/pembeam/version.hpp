#pragma once

namespace pembeam {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pembeam
