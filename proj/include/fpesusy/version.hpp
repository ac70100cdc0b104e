#pragma once

namespace fpesusy {

inline constexpr const char* version = "0.1.0";

}  // namespace fpesusy
