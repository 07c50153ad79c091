#pragma once

#include <string_view>

#ifndef QSC_VERSION
#define QSC_VERSION "0.3.0"
#endif

namespace qsc {

inline constexpr std::string_view kVersion = QSC_VERSION;

}  // namespace qsc
