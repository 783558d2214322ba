#pragma once

namespace rkt {

inline constexpr const char* version = "1.0.0";
inline constexpr int report_schema_version = 1;

}  // namespace rkt
