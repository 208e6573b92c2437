#pragma once

namespace heteronet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace heteronet
