#pragma once

#include <string_view>

namespace artic {

/// One-line warning to stderr; kept behind a function so tests can stay
/// quiet via set_warnings_enabled(false).
void log_warning(std::string_view message);

void set_warnings_enabled(bool enabled);

}  // namespace artic
