#pragma once

namespace qms {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qms
