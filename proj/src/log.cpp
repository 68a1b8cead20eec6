#include "kspecpart/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace ksp::log {
namespace {

std::atomic<Level> g_level{Level::kWarn};
std::mutex g_mutex;

void emit(Level at, std::string_view tag, std::string_view msg) {
  if (static_cast<int>(g_level.load()) < static_cast<int>(at)) return;
  std::lock_guard lock(g_mutex);
  std::cerr << "[kspecpart " << tag << "] " << msg << '\n';
}

}  // namespace

void set_level(Level l) { g_level = l; }
Level level() { return g_level.load(); }

void warn(std::string_view msg) { emit(Level::kWarn, "warn", msg); }
void info(std::string_view msg) { emit(Level::kInfo, "info", msg); }
void debug(std::string_view msg) { emit(Level::kDebug, "debug", msg); }

}  // namespace ksp::log
