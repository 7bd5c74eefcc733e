#include "oro/common.hpp"

#include <cstdlib>
#include <cstring>

namespace oro {

LogLevel log_level() {
    static LogLevel lvl = [] {
        const char* e = std::getenv("ORO_LOG");
        if (e == nullptr) return LogLevel::Error;
        if (std::strcmp(e, "debug") == 0) return LogLevel::Debug;
        if (std::strcmp(e, "info") == 0) return LogLevel::Info;
        return LogLevel::Error;
    }();
    return lvl;
}

void log_message(LogLevel lvl, const std::string& msg) {
    if (static_cast<int>(lvl) > static_cast<int>(log_level())) return;
    const char* tag = lvl == LogLevel::Error ? "error" : (lvl == LogLevel::Info ? "info" : "debug");
    std::fprintf(stderr, "[oro:%s] %s\n", tag, msg.c_str());
}

std::string fmt_double(double x) {
    char buf[64];
    // Shortest representation that parses back to the same value.
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) return buf;
    }
    return buf;
}

} // namespace oro
