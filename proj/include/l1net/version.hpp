#pragma once

namespace l1net {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace l1net
