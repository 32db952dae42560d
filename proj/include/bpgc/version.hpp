#pragma once

namespace bpgc {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace bpgc
