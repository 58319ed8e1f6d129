#pragma once

namespace vfield {

inline constexpr const char* kVersion = "0.1.0";

}
