#pragma once

namespace scfto {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace scfto
