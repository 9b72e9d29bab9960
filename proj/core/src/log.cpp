#include "artic/log.hpp"

#include <atomic>
#include <cstdio>
#include <string>

namespace artic {

namespace {
std::atomic<bool> g_warnings_enabled{true};
}

void log_warning(std::string_view message) {
    if (g_warnings_enabled.load(std::memory_order_relaxed)) {
        std::fprintf(stderr, "warning: %.*s\n", static_cast<int>(message.size()),
                     message.data());
    }
}

void set_warnings_enabled(bool enabled) {
    g_warnings_enabled.store(enabled, std::memory_order_relaxed);
}

}  // namespace artic
