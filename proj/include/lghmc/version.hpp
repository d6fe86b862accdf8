#pragma once

namespace lghmc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lghmc
