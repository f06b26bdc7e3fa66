#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace micz {

enum class LogLevel : int { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Diagnostics verbosity, read once from the MICZ_LOG environment variable
/// (error | warn | info | debug); defaults to warn.
inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("MICZ_LOG");
        if (!env) return LogLevel::Warn;
        if (std::strcmp(env, "error") == 0) return LogLevel::Error;
        if (std::strcmp(env, "info") == 0) return LogLevel::Info;
        if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

template <class... Args>
void log_msg(LogLevel level, const char* fmt, Args... args) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) return;
    const char* tag = level == LogLevel::Error  ? "error"
                      : level == LogLevel::Warn ? "warn"
                      : level == LogLevel::Info ? "info"
                                                : "debug";
    std::fprintf(stderr, "[micz:%s] ", tag);
    std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
}

inline void log_msg(LogLevel level, const char* msg) { log_msg(level, "%s", msg); }

}  // namespace micz
