#pragma once

namespace pathctl {

inline constexpr const char* version = "0.1.0";

}  // namespace pathctl
