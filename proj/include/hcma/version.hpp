#pragma once

namespace hcma {

#ifdef HCMA_VERSION
inline constexpr const char* version = HCMA_VERSION;
#else
inline constexpr const char* version = "0.1.0";
#endif

}  // namespace hcma
