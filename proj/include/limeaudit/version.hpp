#pragma once

namespace limeaudit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace limeaudit
