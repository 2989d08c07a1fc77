#pragma once

namespace fdsched {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fdsched
