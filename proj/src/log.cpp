#include "wikies/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace wikies::logging {

namespace {

Level parse_env() {
  const char* raw = std::getenv("WIKIES_LOG");
  if (raw == nullptr) return Level::kError;
  if (std::strcmp(raw, "debug") == 0) return Level::kDebug;
  if (std::strcmp(raw, "info") == 0) return Level::kInfo;
  return Level::kError;
}

const char* tag(Level lv) {
  switch (lv) {
    case Level::kError: return "error";
    case Level::kInfo: return "info";
    case Level::kDebug: return "debug";
  }
  return "?";
}

std::mutex g_mutex;

}  // namespace

Level level() {
  static Level lv = parse_env();
  return lv;
}

bool enabled(Level lv) { return static_cast<int>(lv) <= static_cast<int>(level()); }

void write(Level lv, std::string_view msg) {
  if (!enabled(lv)) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::fprintf(stderr, "[wikies %s] %.*s\n", tag(lv), static_cast<int>(msg.size()), msg.data());
}

}  // namespace wikies::logging
