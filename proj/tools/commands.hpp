#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace kmlab::cli {

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    std::string format = "json";  ///< csv | json, where a command offers both
};

// Exit codes: 0 success / all hypotheses hold; 1 hypothesis or run failure;
// 2 config parse error; 3 integration failure.
int cmd_simulate(const CommonOptions& opts);
int cmd_check(const CommonOptions& opts, const std::string& which);
int cmd_sweep(const CommonOptions& opts);
int cmd_montecarlo(const CommonOptions& opts);

} // namespace kmlab::cli
