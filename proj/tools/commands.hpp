#pragma once

#include <filesystem>

#include "run_config.hpp"

namespace nfield::cli {

// Each command writes its artifacts into `out`, prints one summary line and
// returns an exit status. Numerical errors propagate to the caller.
int cmd_spectrum(const RunConfig& c, const std::filesystem::path& out);
int cmd_eigfun(const RunConfig& c, const std::filesystem::path& out);
int cmd_resolvent_check(const RunConfig& c, const std::filesystem::path& out);
int cmd_hopf(const RunConfig& c, const std::filesystem::path& out);
int cmd_double_hopf(const RunConfig& c, const std::filesystem::path& out);
int cmd_simulate(const RunConfig& c, const std::filesystem::path& out);
int cmd_discrete_spectrum(const RunConfig& c, const std::filesystem::path& out);

}  // namespace nfield::cli
