// version.hpp

#pragma once

namespace lzsm {

inline constexpr const char* project_name = "lzsm";
inline constexpr const char* project_version = "0.1.0";

} // namespace lzsm
