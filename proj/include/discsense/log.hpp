#pragma once

#include <spdlog/spdlog.h>

namespace discsense {

// Shared logger; writes to stderr so data outputs stay on files only.
spdlog::logger& log();

void set_log_level(spdlog::level::level_enum level);

} // namespace discsense
