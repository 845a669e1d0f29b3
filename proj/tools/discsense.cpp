// Command-line driver: extract -> train -> eval -> predict -> mine -> report.

#include "discsense/error.hpp"
#include "discsense/log.hpp"
#include "discsense/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discourse-marker extraction, prediction and marker=>category rule mining"};
    app.require_subcommand(1);

    std::string config_path;
    if (const char* env = std::getenv("DISCSENSE_CONFIG")) config_path = env;
    unsigned jobs = 1;
    int verbosity = 0;
    app.add_option("-c,--config", config_path, "pipeline config file (default: $DISCSENSE_CONFIG)");
    app.add_option("-j,--jobs", jobs, "worker threads; never changes results")->check(CLI::Range(1u, 1024u));
    app.add_flag("-v,--verbose", verbosity, "more diagnostics (repeatable)");
    app.add_flag_callback("-q,--quiet", [&] { verbosity = -1; }, "warnings and errors only");

    using Command = std::function<void(const discsense::PipelineConfig&, const discsense::RunOptions&)>;
    const std::map<std::string, std::pair<std::string, Command>> commands = {
        {"extract", {"build marker-pair datasets from the corpus", [](auto& c, auto& o) { discsense::cmd_extract(c, o); }}},
        {"train", {"train the linear marker model", discsense::cmd_train}},
        {"eval", {"test accuracy and majority baseline", [](auto& c, auto& o) { discsense::cmd_eval(c, o); }}},
        {"predict", {"adapt datasets and write the prediction file", [](auto& c, auto& o) { discsense::cmd_predict(c, o); }}},
        {"mine", {"mine marker=>category rules", [](auto& c, auto& o) { discsense::cmd_mine(c, o); }}},
        {"report", {"write the combined run report", discsense::cmd_report}},
        {"pipeline", {"run every stage in order", discsense::cmd_pipeline}},
    };
    for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and --version exit 0; usage errors count as validation errors.
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    if (verbosity < 0) {
        discsense::set_log_level(spdlog::level::warn);
    } else if (verbosity > 0) {
        discsense::set_log_level(spdlog::level::debug);
    }

    try {
        if (config_path.empty()) throw discsense::ConfigError("no config given (use --config or DISCSENSE_CONFIG)");
        const auto cfg = discsense::PipelineConfig::load(config_path);
        const discsense::RunOptions opts{jobs};
        for (const auto* sub : app.get_subcommands()) commands.at(sub->get_name()).second(cfg, opts);
    } catch (const discsense::ConfigError& e) {
        discsense::log().error("{}", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        discsense::log().error("{}", e.what());
        return kExitRuntime;
    }
    return kExitOk;
}
