#include "discsense/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>

namespace discsense {

spdlog::logger& log() {
    static std::shared_ptr<spdlog::logger> logger = [] {
        auto l = std::make_shared<spdlog::logger>("discsense", std::make_shared<spdlog::sinks::stderr_sink_mt>());
        l->set_pattern("[%l] %v");
        l->set_level(spdlog::level::info);
        return l;
    }();
    return *logger;
}

void set_log_level(spdlog::level::level_enum level) { log().set_level(level); }

} // namespace discsense
