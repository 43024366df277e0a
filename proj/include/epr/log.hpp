#pragma once

#include <string_view>

// Human-readable diagnostics go to stderr; machine output never passes here.
namespace epr::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Quiet = 3 };

void set_level(Level level);
Level level();

void debug(std::string_view message);
void info(std::string_view message);
void warn(std::string_view message);

}  // namespace epr::log
