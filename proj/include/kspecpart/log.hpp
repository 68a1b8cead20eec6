#pragma once

#include <string_view>

namespace ksp::log {

enum class Level { kQuiet = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

void set_level(Level level);
Level level();

void warn(std::string_view msg);
void info(std::string_view msg);
void debug(std::string_view msg);

}  // namespace ksp::log
