#pragma once

namespace dmu {

inline constexpr const char* kVersion = "dmu 0.1.0";

}  // namespace dmu
