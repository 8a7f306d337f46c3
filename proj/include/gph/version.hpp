#pragma once

namespace gph {

inline constexpr const char* kLibraryName = "gphase";
inline constexpr const char* kLibraryVersion = "1.0.0";

}  // namespace gph
