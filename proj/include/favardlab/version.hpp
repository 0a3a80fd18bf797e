#pragma once

namespace favardlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace favardlab
