#pragma once

namespace mrca {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mrca
