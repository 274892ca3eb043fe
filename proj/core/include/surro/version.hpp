#pragma once

namespace surro {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace surro
