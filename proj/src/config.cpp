#include "mmrelay/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace mmrelay {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> to_int(std::string_view s) {
  s = trim(s);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

struct Field {
  std::string_view section;
  std::string_view key;
  std::function<bool(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename Get>
Field real(std::string_view section, std::string_view key, Get member) {
  return {section, key,
          [member](ExperimentConfig& c, std::string_view v) {
            const auto d = to_double(v);
            if (!d) return false;
            member(c) = *d;
            return true;
          },
          [member](const ExperimentConfig& c) {
            return fmt::format("{}", member(const_cast<ExperimentConfig&>(c)));
          }};
}

template <typename Get>
Field integer(std::string_view section, std::string_view key, Get member) {
  return {section, key,
          [member](ExperimentConfig& c, std::string_view v) {
            using T = std::remove_reference_t<decltype(member(c))>;
            const auto d = to_int<T>(v);
            if (!d) return false;
            member(c) = *d;
            return true;
          },
          [member](const ExperimentConfig& c) {
            return fmt::format("{}", member(const_cast<ExperimentConfig&>(c)));
          }};
}

template <typename E, typename Get>
Field choice(std::string_view section, std::string_view key, Get member,
             std::vector<std::pair<std::string_view, E>> names) {
  return {section, key,
          [member, names](ExperimentConfig& c, std::string_view v) {
            v = trim(v);
            for (const auto& [name, value] : names) {
              if (name == v) {
                member(c) = value;
                return true;
              }
            }
            return false;
          },
          [member, names](const ExperimentConfig& c) {
            const E cur = member(const_cast<ExperimentConfig&>(c));
            for (const auto& [name, value] : names) {
              if (value == cur) return std::string(name);
            }
            return std::string("?");
          }};
}

std::string format_sweep(const Sweep& s) {
  if (s.param == SweepParam::None) return "none";
  std::string out = fmt::format("{}=", to_string(s.param));
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    out += fmt::format("{}{}", k ? "," : "", s.values[k]);
  }
  return out;
}

std::string format_policies(const std::vector<Policy>& ps) {
  std::string out;
  for (std::size_t k = 0; k < ps.size(); ++k) out += fmt::format("{}{}", k ? "," : "", to_string(ps[k]));
  return out;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    auto sc = [](auto getter) { return [getter](ExperimentConfig& c) -> auto& { return getter(c.scenario); }; };
    f.push_back(real("scenario", "arena_width", sc([](ScenarioConfig& s) -> auto& { return s.arena.width; })));
    f.push_back(real("scenario", "arena_height", sc([](ScenarioConfig& s) -> auto& { return s.arena.height; })));
    f.push_back(integer("scenario", "n_nodes", sc([](ScenarioConfig& s) -> auto& { return s.n_nodes; })));
    f.push_back(integer("scenario", "n_static", sc([](ScenarioConfig& s) -> auto& { return s.n_static; })));
    f.push_back(integer("scenario", "n_dynamic", sc([](ScenarioConfig& s) -> auto& { return s.n_dynamic; })));
    f.push_back(real("scenario", "v_max", sc([](ScenarioConfig& s) -> auto& { return s.v_max; })));
    f.push_back(real("scenario", "obstacle_v_max", sc([](ScenarioConfig& s) -> auto& { return s.obstacle_v_max; })));
    f.push_back(real("scenario", "dt", sc([](ScenarioConfig& s) -> auto& { return s.dt; })));
    f.push_back(integer("scenario", "packet_bytes", sc([](ScenarioConfig& s) -> auto& { return s.packet_bytes; })));
    f.push_back(real("scenario", "load", sc([](ScenarioConfig& s) -> auto& { return s.load; })));
    f.push_back(real("scenario", "radar_density", sc([](ScenarioConfig& s) -> auto& { return s.radar_density; })));
    f.push_back(choice<ObstacleMode>("scenario", "obstacle_mode",
                                     sc([](ScenarioConfig& s) -> auto& { return s.obstacle_mode; }),
                                     {{"fixed", ObstacleMode::Fixed}, {"poisson", ObstacleMode::Poisson}}));
    f.push_back(real("scenario", "obstacle_density", sc([](ScenarioConfig& s) -> auto& { return s.obstacle_density; })));
    f.push_back(real("scenario", "obstacle_extent_max", sc([](ScenarioConfig& s) -> auto& { return s.obstacle_extent_max; })));
    f.push_back(integer("scenario", "dest_min_hops", sc([](ScenarioConfig& s) -> auto& { return s.dest_min_hops; })));
    f.push_back(integer("scenario", "dest_max_hops", sc([](ScenarioConfig& s) -> auto& { return s.dest_max_hops; })));
    f.push_back(integer("scenario", "hops_max", sc([](ScenarioConfig& s) -> auto& { return s.hops_max; })));
    f.push_back(integer("scenario", "horizon_steps", sc([](ScenarioConfig& s) -> auto& { return s.horizon_steps; })));
    f.push_back(integer("scenario", "drain_steps", sc([](ScenarioConfig& s) -> auto& { return s.drain_steps; })));
    f.push_back(integer("scenario", "max_held_steps", sc([](ScenarioConfig& s) -> auto& { return s.max_held_steps; })));
    f.push_back(real("scenario", "contact_radius", sc([](ScenarioConfig& s) -> auto& { return s.contact_radius; })));
    f.push_back(choice<CandidateFilter>("scenario", "candidate_filter",
                                        sc([](ScenarioConfig& s) -> auto& { return s.candidate_filter; }),
                                        {{"forward-progress", CandidateFilter::ForwardProgress},
                                         {"all-neighbors", CandidateFilter::AllNeighbors}}));
    f.push_back(choice<KinematicsMode>("scenario", "kinematics",
                                       sc([](ScenarioConfig& s) -> auto& { return s.kinematics; }),
                                       {{"corrected", KinematicsMode::Corrected},
                                        {"cos-elevation", KinematicsMode::CosElevation}}));

    auto ch = [](auto getter) { return [getter](ExperimentConfig& c) -> auto& { return getter(c.scenario.channel); }; };
    f.push_back(real("channel", "tx_power_dbm", ch([](ChannelParams& p) -> auto& { return p.tx_power_dbm; })));
    f.push_back(real("channel", "carrier_freq_hz", ch([](ChannelParams& p) -> auto& { return p.carrier_freq_hz; })));
    f.push_back(real("channel", "ref_dist_m", ch([](ChannelParams& p) -> auto& { return p.ref_dist_m; })));
    f.push_back(real("channel", "ple", ch([](ChannelParams& p) -> auto& { return p.ple; })));
    f.push_back(real("channel", "shadow_sigma_db", ch([](ChannelParams& p) -> auto& { return p.shadow_sigma_db; })));
    f.push_back(real("channel", "bandwidth_hz", ch([](ChannelParams& p) -> auto& { return p.bandwidth_hz; })));
    f.push_back(real("channel", "noise_density_dbm_hz", ch([](ChannelParams& p) -> auto& { return p.noise_density_dbm_hz; })));
    f.push_back(real("channel", "snr_threshold_db", ch([](ChannelParams& p) -> auto& { return p.snr_threshold_db; })));
    f.push_back(integer("channel", "antenna_m", ch([](ChannelParams& p) -> auto& { return p.antenna_m; })));
    f.push_back(real("channel", "sidelobe_gain", ch([](ChannelParams& p) -> auto& { return p.sidelobe_gain; })));
    f.push_back(real("channel", "beamwidth_rad", ch([](ChannelParams& p) -> auto& { return p.beamwidth_rad; })));
    f.push_back(real("channel", "tx_gain_db", ch([](ChannelParams& p) -> auto& { return p.tx_gain_db; })));
    f.push_back(real("channel", "rx_gain_db", ch([](ChannelParams& p) -> auto& { return p.rx_gain_db; })));
    f.push_back(real("channel", "penetration_loss_db", ch([](ChannelParams& p) -> auto& { return p.penetration_loss_db; })));
    // Write-only shortcut: replaces the per-end gains with the array gain M^2.
    f.push_back({"channel", "gain_preset",
                 [](ExperimentConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "array") {
                     c.scenario.channel = with_array_gain(c.scenario.channel);
                     return true;
                   }
                   if (v == "stated") {
                     c.scenario.channel.tx_gain_db = ChannelParams{}.tx_gain_db;
                     c.scenario.channel.rx_gain_db = ChannelParams{}.rx_gain_db;
                     return true;
                   }
                   return false;
                 },
                 nullptr});

    auto det = [](auto getter) { return [getter](ExperimentConfig& c) -> auto& { return getter(c.scenario.detection); }; };
    f.push_back(choice<DetectionMode>("detection", "mode",
                                      det([](DetectionModel& d) -> auto& { return d.mode; }),
                                      {{"perfect", DetectionMode::Perfect},
                                       {"constant", DetectionMode::Constant},
                                       {"range-threshold", DetectionMode::RangeThreshold}}));
    f.push_back(real("detection", "p", det([](DetectionModel& d) -> auto& { return d.p; })));
    f.push_back(real("detection", "radius", det([](DetectionModel& d) -> auto& { return d.radius; })));
    f.push_back(real("detection", "p_in", det([](DetectionModel& d) -> auto& { return d.p_in; })));
    f.push_back(real("detection", "p_out", det([](DetectionModel& d) -> auto& { return d.p_out; })));
    f.push_back(choice<CombinationRule>("detection", "combination_rule",
                                        sc([](ScenarioConfig& s) -> auto& { return s.combination_rule; }),
                                        {{"literal", CombinationRule::Literal},
                                         {"miss-aware", CombinationRule::MissAware}}));

    f.push_back(integer("run", "runs", sc([](ScenarioConfig& s) -> auto& { return s.runs; })));
    f.push_back(integer("run", "seed", sc([](ScenarioConfig& s) -> auto& { return s.seed; })));
    f.push_back(integer("run", "workers", [](ExperimentConfig& c) -> auto& { return c.workers; }));
    f.push_back({"run", "policies",
                 [](ExperimentConfig& c, std::string_view v) {
                   try {
                     c.policies = parse_policy_list(v);
                     return true;
                   } catch (const std::invalid_argument&) {
                     return false;
                   }
                 },
                 [](const ExperimentConfig& c) { return format_policies(c.policies); }});
    f.push_back({"run", "sweep",
                 [](ExperimentConfig& c, std::string_view v) {
                   try {
                     c.sweep = parse_sweep(v);
                     return true;
                   } catch (const std::invalid_argument&) {
                     return false;
                   }
                 },
                 [](const ExperimentConfig& c) { return format_sweep(c.sweep); }});
    return f;
  }();
  return table;
}

}  // namespace

ConfigError::ConfigError(std::string key, int line, const std::string& what)
    : std::runtime_error(line > 0 ? fmt::format("config line {}: {}: {}", line, key, what)
                                  : fmt::format("config: {}: {}", key, what)),
      key_(std::move(key)),
      line_(line) {}

void set_option(ExperimentConfig& cfg, std::string_view section, std::string_view key,
                std::string_view value, int line) {
  const std::string name = fmt::format("{}.{}", section, key);
  for (const auto& f : fields()) {
    if (f.section != section || f.key != key) continue;
    if (!f.set(cfg, value)) {
      throw ConfigError(name, line, fmt::format("invalid value '{}'", trim(value)));
    }
    return;
  }
  throw ConfigError(name, line, "unknown key");
}

void apply_config_text(ExperimentConfig& cfg, std::string_view text) {
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(std::string(line), line_no, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(std::string(line), line_no, "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    if (section.empty()) throw ConfigError(std::string(key), line_no, "key outside of a section");
    // Sweep values contain '=' themselves, so only the first one splits.
    set_option(cfg, section, key, line.substr(eq + 1), line_no);
  }
  validate(cfg);
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
}

void apply_environment(ExperimentConfig& cfg,
                       const std::function<const char*(const char*)>& getenv) {
  for (const auto& f : fields()) {
    const std::string var = fmt::format("MMRELAY_{}_{}", upper(f.section), upper(f.key));
    if (const char* v = getenv(var.c_str())) {
      const std::string name = fmt::format("{}.{}", f.section, f.key);
      if (!f.set(cfg, v)) throw ConfigError(name, 0, fmt::format("invalid value '{}' in {}", v, var));
    }
  }
  validate(cfg);
}

void validate(const ExperimentConfig& cfg) {
  try {
    cfg.scenario.validate();
  } catch (const InvalidConfig& e) {
    throw ConfigError("scenario", 0, e.what());
  }
  if (cfg.policies.empty()) throw ConfigError("run.policies", 0, "at least one policy is required");
  if (cfg.workers < 0) throw ConfigError("run.workers", 0, "must be >= 0");
  try {
    for (double v : cfg.sweep.values) apply_sweep_value(cfg.scenario, cfg.sweep.param, v);
  } catch (const InvalidConfig& e) {
    throw ConfigError("run.sweep", 0, e.what());
  }
}

std::string effective_config(const ExperimentConfig& cfg) {
  std::string out;
  std::string_view section;
  for (const auto& f : fields()) {
    if (!f.get) continue;
    if (f.section != section) {
      section = f.section;
      out += fmt::format("[{}]\n", section);
    }
    out += fmt::format("{} = {}\n", f.key, f.get(cfg));
  }
  return out;
}

Sweep parse_sweep(std::string_view spec) {
  spec = trim(spec);
  Sweep s;
  if (spec == "none" || spec.empty()) return s;
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos) throw std::invalid_argument("sweep must look like param=v1,v2,...");
  try {
    s.param = parse_sweep_param(trim(spec.substr(0, eq)));
  } catch (const InvalidConfig& e) {
    throw std::invalid_argument(e.what());
  }
  std::string_view rest = spec.substr(eq + 1);
  while (true) {
    const auto comma = rest.find(',');
    const auto v = to_double(rest.substr(0, comma));
    if (!v) throw std::invalid_argument(fmt::format("bad sweep value '{}'", trim(rest.substr(0, comma))));
    s.values.push_back(*v);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return s;
}

std::vector<Policy> parse_policy_list(std::string_view list) {
  std::vector<Policy> out;
  while (true) {
    const auto comma = list.find(',');
    const std::string_view name = trim(list.substr(0, comma));
    if (name == "all") {
      out.insert(out.end(), {Policy::DObs, Policy::RSS, Policy::CBF});
    } else {
      out.push_back(parse_policy(name));
    }
    if (comma == std::string_view::npos) break;
    list = list.substr(comma + 1);
  }
  return out;
}

}  // namespace mmrelay
