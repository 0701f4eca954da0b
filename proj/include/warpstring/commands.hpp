#pragma once

#include <iosfwd>
#include <string>

#include "warpstring/config.hpp"

namespace warpstring {

/// Build the (single-profile) metric described by the config. Throws
/// ParseError / DomainError.
WarpedMetric build_metric(const RunConfig& cfg);

/// Dispatch one batch command ("curvature" | "census" | "family") and write
/// its report(s) per the config's output section. Returns the process exit
/// code: 0 once a report is produced (negative mathematical results
/// included), 2 on configuration errors, 3 on domain errors.
int run_command(const std::string& command, const RunConfig& cfg, std::ostream& err);

}  // namespace warpstring
