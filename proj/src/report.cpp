#include "mmrelay/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>

#include "mmrelay/relay.hpp"

namespace mmrelay {

std::string format_row(const ResultRow& row) {
  const RunMetrics& t = row.totals;
  return fmt::format("{},{:.3f},{},{:.3f},{:.6f},{:.6f},{},{},{},{},{},{},{}", to_string(row.sweep_param),
                     row.sweep_value, to_string(row.policy), t.avg_throughput_bps, t.packet_loss_rate,
                     t.avg_delay_steps, t.packets_sent, t.delivered, t.dropped_mobility,
                     t.dropped_blockage, t.dropped_nocand, row.runs, row.seed);
}

std::string format_csv(std::span<const ResultRow> rows, std::string_view effective_config) {
  if (rows.empty()) throw std::invalid_argument("no result rows to write");
  std::string out;
  std::size_t pos = 0;
  while (pos < effective_config.size()) {
    const std::size_t end = std::min(effective_config.find('\n', pos), effective_config.size());
    out += fmt::format("# {}\n", effective_config.substr(pos, end - pos));
    pos = end + 1;
  }
  out += kCsvHeader;
  out += '\n';
  for (const auto& row : rows) {
    out += format_row(row);
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move output into place at '" + path + "': " + ec.message());
  }
}

std::string link_budget_report(const ChannelParams& p) {
  p.validate();
  const double gamma = default_gamma_mw(p);
  const double snr_at_threshold = db_to_linear(p.snr_threshold_db);
  std::string out;
  out += fmt::format("wavelength_m: {:.6f}\n", wavelength_m(p));
  out += fmt::format("rx_power_at_d0_dbm: {:.3f}\n", linear_to_db(path_loss_component(p.ref_dist_m, 0.0, p)));
  out += fmt::format("noise_power_dbm: {:.3f}\n", linear_to_db(noise_power_mw(p)));
  out += fmt::format("gamma_dbm: {:.3f}\n", linear_to_db(gamma));
  out += fmt::format("max_los_range_m: {:.2f}\n", max_los_range(p, 0.0));
  out += fmt::format("max_los_range_closed_form_m: {:.4f}\n", los_range_closed_form(p, 0.0));
  out += fmt::format("capacity_at_threshold_bps: {:.1f}\n", capacity_bps(snr_at_threshold, p));
  return out;
}

}  // namespace mmrelay
