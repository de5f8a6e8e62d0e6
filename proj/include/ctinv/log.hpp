#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

// Minimal leveled logging to stderr. The threshold is read once from the
// CTINV_LOG environment variable (error, warn, info, debug; default warn).

namespace ctinv::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

inline Level parse_level(const char* text, Level fallback = Level::warn) {
    if (text == nullptr) return fallback;
    if (std::strcmp(text, "error") == 0) return Level::error;
    if (std::strcmp(text, "warn") == 0) return Level::warn;
    if (std::strcmp(text, "info") == 0) return Level::info;
    if (std::strcmp(text, "debug") == 0) return Level::debug;
    return fallback;
}

inline Level& threshold() {
    static Level level = parse_level(std::getenv("CTINV_LOG"));
    return level;
}

inline void set_threshold(Level level) { threshold() = level; }

inline bool enabled(Level level) { return level <= threshold(); }

inline void write(Level level, const std::string& message) {
    if (!enabled(level)) return;
    static constexpr const char* names[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "[ctinv %s] %s\n", names[static_cast<int>(level)], message.c_str());
}

inline void error(const std::string& message) { write(Level::error, message); }
inline void warn(const std::string& message) { write(Level::warn, message); }
inline void info(const std::string& message) { write(Level::info, message); }
inline void debug(const std::string& message) { write(Level::debug, message); }

}  // namespace ctinv::log
