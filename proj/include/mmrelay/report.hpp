#pragma once

// CSV result files and text reports for the command-line front end.

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mmrelay/channel.hpp"
#include "mmrelay/sim.hpp"

namespace mmrelay {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kCsvHeader =
    "sweep_param,sweep_value,policy,avg_throughput_bps,packet_loss,avg_delay_steps,sent,delivered,"
    "dropped_mobility,dropped_blockage,dropped_nocand,runs,seed";

std::string format_row(const ResultRow& row);

/// Effective configuration as `# ` comment lines, then the header and rows.
/// Throws std::invalid_argument for an empty table.
std::string format_csv(std::span<const ResultRow> rows, std::string_view effective_config);

/// Writes through a temporary file in the same directory and renames it into
/// place, so a failed write never leaves a partial file behind.
void write_file_atomic(const std::string& path, std::string_view content);

/// Derived link-budget quantities for the given channel parameters.
std::string link_budget_report(const ChannelParams& p);

}  // namespace mmrelay
