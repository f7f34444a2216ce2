#pragma once

namespace ifm {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ifm
