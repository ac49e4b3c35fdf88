#pragma once

#include <string_view>

namespace wikies::logging {

enum class Level { kError = 0, kInfo = 1, kDebug = 2 };

// Active level comes from WIKIES_LOG={error|info|debug}; default is error.
Level level();

bool enabled(Level lv);

// Writes one line to stderr when the level is active.
void write(Level lv, std::string_view msg);

inline void error(std::string_view msg) { write(Level::kError, msg); }
inline void info(std::string_view msg) { write(Level::kInfo, msg); }
inline void debug(std::string_view msg) { write(Level::kDebug, msg); }

}  // namespace wikies::logging
