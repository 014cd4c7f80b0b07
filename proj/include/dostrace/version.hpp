#pragma once

namespace dostrace {

inline constexpr const char* kVersion = "0.1.0";

}
