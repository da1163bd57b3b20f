#include "mmrelay/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <string>
#include <utility>

namespace mmrelay {

namespace {

constexpr double kMinLinkDistance = 1e-3;

std::mt19937_64 make_stream(std::uint64_t seed, Stream s) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s)};
  return std::mt19937_64(seq);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidConfig("invalid scenario: " + what);
}

Vec3 clamp_to(const Vec3& p, const Arena& a) {
  return {std::clamp(p.x, 0.0, a.width), std::clamp(p.y, 0.0, a.height), p.z};
}

int count_value(double v, const char* name) {
  require(v >= 0.0 && v == std::floor(v) && v < 1e9, std::string(name) + " must be a non-negative integer");
  return static_cast<int>(v);
}

}  // namespace

void ScenarioConfig::validate() const {
  require(arena.width > 0.0 && arena.height > 0.0, "arena dimensions must be > 0");
  require(n_nodes >= 2, "n_nodes must be >= 2");
  require(n_static >= 0, "n_static must be >= 0");
  require(n_dynamic >= 0, "n_dynamic must be >= 0");
  require(v_max >= 0.0, "v_max must be >= 0");
  require(obstacle_v_max >= 0.0, "obstacle_v_max must be >= 0");
  require(dt > 0.0, "dt must be > 0");
  require(packet_bytes > 0, "packet_bytes must be > 0");
  require(load >= 0.0, "load must be >= 0");
  require(radar_density >= 0.0, "radar_density must be >= 0");
  require(obstacle_density >= 0.0, "obstacle_density must be >= 0");
  require(obstacle_extent_max >= 0.0, "obstacle_extent_max must be >= 0");
  require(dest_min_hops >= 1 && dest_max_hops >= dest_min_hops,
          "destination hop window must satisfy 1 <= min <= max");
  require(hops_max >= 1, "hops_max must be >= 1");
  require(horizon_steps >= 1, "horizon_steps must be >= 1");
  require(drain_steps >= 0, "drain_steps must be >= 0");
  require(max_held_steps >= 1, "max_held_steps must be >= 1");
  require(runs >= 1, "runs must be >= 1");
  require(contact_radius > 0.0, "contact_radius must be > 0");
  try {
    channel.validate();
    detection.validate();
  } catch (const std::invalid_argument& e) {
    throw InvalidConfig(e.what());
  }
}

std::vector<int> Topology::hops_to(NodeId dest) const {
  std::vector<int> hops(n, -1);
  std::deque<NodeId> frontier{dest};
  hops[dest] = 0;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    for (NodeId v : adj[u]) {
      if (hops[v] < 0) {
        hops[v] = hops[u] + 1;
        frontier.push_back(v);
      }
    }
  }
  return hops;
}

std::uint64_t replication_seed(std::uint64_t base, std::uint64_t rep) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

World generate_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const double w = cfg.arena.width;
  const double h = cfg.arena.height;
  const double area = w * h;
  std::uniform_real_distribution<double> ux(0.0, w);
  std::uniform_real_distribution<double> uy(0.0, h);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);

  World world;

  auto node_rng = make_stream(seed, Stream::Nodes);
  world.nodes.reserve(static_cast<std::size_t>(cfg.n_nodes));
  for (int k = 0; k < cfg.n_nodes; ++k) {
    NodeState s;
    s.id = static_cast<NodeId>(k);
    s.pos.x = ux(node_rng);
    s.pos.y = uy(node_rng);
    s.speed = unit(node_rng) * cfg.v_max;
    s.azimuth = angle(node_rng);
    world.nodes.push_back(s);
  }

  auto static_rng = make_stream(seed, Stream::StaticObstacles);
  NodeId next_id = 0;
  for (int l = 0; l < cfg.n_static; ++l) {
    ObstacleState o;
    o.id = next_id++;
    o.kind = ObstacleKind::Static;
    o.pos.x = ux(static_rng);
    o.pos.y = uy(static_rng);
    o.extent_len = unit(static_rng) * cfg.obstacle_extent_max;
    o.extent_angle = angle(static_rng);
    world.obstacles.push_back(o);
  }

  auto dynamic_rng = make_stream(seed, Stream::DynamicObstacles);
  int n_dynamic = cfg.n_dynamic;
  if (cfg.obstacle_mode == ObstacleMode::Poisson) {
    n_dynamic = static_cast<int>(
        std::poisson_distribution<long>(cfg.obstacle_density * area)(dynamic_rng));
  }
  for (int k = 0; k < n_dynamic; ++k) {
    ObstacleState o;
    o.id = next_id++;
    o.kind = ObstacleKind::Dynamic;
    o.pos.x = ux(dynamic_rng);
    o.pos.y = uy(dynamic_rng);
    o.speed = unit(dynamic_rng) * cfg.obstacle_v_max;
    o.azimuth = angle(dynamic_rng);
    o.extent_len = unit(dynamic_rng) * cfg.obstacle_extent_max;
    o.extent_angle = angle(dynamic_rng);
    world.obstacles.push_back(o);
  }

  auto radar_rng = make_stream(seed, Stream::Radars);
  const long n_radars =
      cfg.radar_density > 0.0 ? std::poisson_distribution<long>(cfg.radar_density * area)(radar_rng) : 0;
  for (long r = 0; r < n_radars; ++r) {
    const double x = ux(radar_rng);
    world.radars.push_back({x, uy(radar_rng), 0.0});
  }

  auto endpoint_rng = make_stream(seed, Stream::Endpoints);
  const auto n = static_cast<NodeId>(world.nodes.size());
  world.source = std::uniform_int_distribution<NodeId>(0, n - 1)(endpoint_rng);
  const double nominal = los_range_closed_form(cfg.channel, 0.0);
  std::vector<int> hops(n, -1);
  std::deque<NodeId> frontier{world.source};
  hops[world.source] = 0;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    for (NodeId v = 0; v < n; ++v) {
      if (hops[v] < 0 && distance(world.nodes[u], world.nodes[v]) <= nominal) {
        hops[v] = hops[u] + 1;
        frontier.push_back(v);
      }
    }
  }
  std::vector<NodeId> pool;
  NodeId nearest = world.source == 0 ? 1 : 0;
  for (NodeId k = 0; k < n; ++k) {
    if (k == world.source) continue;
    if (hops[k] >= cfg.dest_min_hops && hops[k] <= cfg.dest_max_hops) pool.push_back(k);
    if (distance(world.nodes[world.source], world.nodes[k]) <
        distance(world.nodes[world.source], world.nodes[nearest])) {
      nearest = k;
    }
  }
  world.destination =
      pool.empty() ? nearest
                   : pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(endpoint_rng)];
  return world;
}

Topology build_topology(const World& world, const ShadowField& shadow, const ScenarioConfig& cfg) {
  const std::size_t n = world.nodes.size();
  const double gamma = default_gamma_mw(cfg.channel);
  Topology t;
  t.n = n;
  t.in_range.assign(n * n, 0);
  t.blocked.assign(n * n, 0);
  t.capacity.assign(n * n, 0.0);
  t.adj.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const NodeState& a = world.nodes[i];
      const NodeState& b = world.nodes[j];
      const double d = std::max(distance(a, b), kMinLinkDistance);
      const double pl = path_loss_component(d, shadow.at(i, j), cfg.channel);
      if (!pl_threshold_test(pl, gamma)) continue;
      bool blocked = false;
      const Segment3 link{a.pos, b.pos};
      for (const auto& o : world.obstacles) {
        if (point_segment_distance(o.pos, link) <= cfg.contact_radius) {
          blocked = true;
          break;
        }
      }
      const double cap = snr_and_capacity(pl, false, cfg.channel).capacity_bps;
      for (auto [u, v] : {std::pair{i, j}, std::pair{j, i}}) {
        t.in_range[u * n + v] = 1;
        t.blocked[u * n + v] = blocked ? 1 : 0;
        t.capacity[u * n + v] = cap;
      }
      if (!blocked) {
        t.adj[i].push_back(static_cast<NodeId>(j));
        t.adj[j].push_back(static_cast<NodeId>(i));
      }
    }
  }
  return t;
}

Simulation::Simulation(const ScenarioConfig& cfg, Policy policy, std::uint64_t seed)
    : Simulation(cfg, policy, generate_scenario(cfg, seed), seed) {}

Simulation::Simulation(const ScenarioConfig& cfg, Policy policy, World world, std::uint64_t seed)
    : cfg_(cfg),
      policy_(policy),
      world_(std::move(world)),
      queues_(world_.nodes.size()),
      shadow_rng_(make_stream(seed, Stream::Shadowing)),
      shadow_sampler_(cfg.channel.shadow_sigma_db),
      detection_(cfg.detection),
      gamma_mw_(default_gamma_mw(cfg.channel)) {
  cfg_.validate();
  if (world_.nodes.size() < 2 || world_.source >= world_.nodes.size() ||
      world_.destination >= world_.nodes.size() || world_.source == world_.destination) {
    throw InvalidConfig("world needs two distinct endpoints among its nodes");
  }
  if (detection_.mode == DetectionMode::RangeThreshold) detection_.radar_positions = world_.radars;
}

void Simulation::end_of_step_holds() {
  for (auto& q : queues_) {
    std::vector<Packet> kept;
    kept.reserve(q.size());
    for (Packet p : q) {
      if (p.stalled && ++p.held >= cfg_.max_held_steps) {
        ++m_.dropped_nocand;
        continue;
      }
      p.stalled = false;
      p.avail = 0.0;
      kept.push_back(p);
    }
    q = std::move(kept);
  }
}

Simulation::LinkFailure Simulation::failure_time(NodeId i, NodeId j, double shadow_db) const {
  const NodeState& a = world_.nodes[i];
  const NodeState& b = world_.nodes[j];
  const auto blocked_at =
      earliest_blockage_time(a, b, world_.obstacles, cfg_.dt, cfg_.contact_radius, cfg_.kinematics);

  std::optional<double> exit_at;
  const double d_next = std::max(distance(advance(a, cfg_.dt, cfg_.kinematics),
                                          advance(b, cfg_.dt, cfg_.kinematics)),
                                 kMinLinkDistance);
  if (!pl_threshold_test(path_loss_component(d_next, shadow_db, cfg_.channel), gamma_mw_)) {
    // |q0 + w tau| = R has exactly one root in (0, dt] when the link starts in range.
    const double range = los_range_closed_form(cfg_.channel, shadow_db);
    const Vec3 q0 = b.pos - a.pos;
    const Vec3 w = velocity(b, cfg_.kinematics) - velocity(a, cfg_.kinematics);
    const double qa = norm2(w);
    const double qb = 2.0 * dot(q0, w);
    const double qc = norm2(q0) - range * range;
    double tau = cfg_.dt;
    if (qa > 0.0) {
      const double disc = std::max(qb * qb - 4.0 * qa * qc, 0.0);
      tau = (-qb + std::sqrt(disc)) / (2.0 * qa);
    }
    exit_at = std::clamp(tau, 0.0, cfg_.dt);
  }

  LinkFailure f;
  f.by_blockage = blocked_at && (!exit_at || *blocked_at <= *exit_at);
  f.at = f.by_blockage ? blocked_at : exit_at;
  return f;
}

bool Simulation::step() {
  const int total = cfg_.horizon_steps + cfg_.drain_steps;
  if (world_.step >= total) return false;

  for (auto& s : world_.nodes) s = reflect_at_walls(s, cfg_.arena, cfg_.dt, cfg_.kinematics);
  for (auto& o : world_.obstacles) o = reflect_at_walls(o, cfg_.arena, cfg_.dt, cfg_.kinematics);

  const auto n = world_.nodes.size();
  const ShadowField shadow = ShadowField::draw(n, shadow_sampler_, shadow_rng_);

  if (world_.step < cfg_.horizon_steps) {
    arrival_credit_ += cfg_.load * cfg_.dt;
    const double whole = std::floor(arrival_credit_);
    arrival_credit_ -= whole;
    auto& q = queues_[world_.source];
    for (long k = 0; k < static_cast<long>(whole); ++k) {
      Packet p;
      p.gen_step = world_.step;
      q.push_back(p);
      ++m_.packets_sent;
    }
  }

  topology_ = build_topology(world_, shadow, cfg_);
  const NodeId dest = world_.destination;
  const std::vector<int> hops = topology_.hops_to(dest);

  LinkContext ctx;
  ctx.obstacles = world_.obstacles;
  ctx.dt = cfg_.dt;
  ctx.channel = cfg_.channel;
  ctx.gamma_mw = gamma_mw_;
  ctx.detection = detection_;
  ctx.rule = cfg_.combination_rule;
  ctx.mode = cfg_.kinematics;
  ctx.contact_radius = cfg_.contact_radius;
  ctx.shadow = &shadow;
  ctx.is_edge = [this](NodeId a, NodeId b) { return topology_.has_edge(a, b); };
  ctx.on_assessment = trace_;

  // Relay choices are made once per (node, remaining hop budget) at t and
  // hold for the whole step; -2 marks "not decided yet", -1 "no candidate".
  const int budgets = cfg_.hops_max + 1;
  std::vector<int> choice(n * static_cast<std::size_t>(budgets), -2);
  std::vector<NodeState> candidates;
  auto relay_for = [&](NodeId i, int hops_done) -> int {
    const int budget = cfg_.hops_max - hops_done - 1;
    if (budget < 0) return -1;
    int& slot = choice[i * static_cast<std::size_t>(budgets) + static_cast<std::size_t>(budget)];
    if (slot != -2) return slot;
    const double own = distance(world_.nodes[i], world_.nodes[dest]);
    candidates.clear();
    for (NodeId j : topology_.adj[i]) {
      if (hops[j] < 0 || hops[j] > budget) continue;
      const bool forward = distance(world_.nodes[j], world_.nodes[dest]) < own;
      if (j != dest && cfg_.candidate_filter == CandidateFilter::ForwardProgress && !forward) continue;
      candidates.push_back(world_.nodes[j]);
    }
    const PolicyChoice c = select_relay(policy_, world_.nodes[i], candidates, world_.nodes[dest], ctx);
    slot = c.chosen ? static_cast<int>(*c.chosen) : -1;
    return slot;
  };

  std::vector<LinkFailure> failures(n * n);
  std::vector<char> failure_known(n * n, 0);
  auto failure_of = [&](NodeId i, NodeId j) -> const LinkFailure& {
    if (!failure_known[i * n + j]) {
      failures[i * n + j] = failure_time(i, j, shadow.at(i, j));
      failure_known[i * n + j] = 1;
    }
    return failures[i * n + j];
  };

  // Event loop: the transmitter whose next packet can start earliest goes
  // first, so relays forward packets as soon as they have arrived.
  std::vector<double> free_at(n, 0.0);
  std::vector<char> done(n, 0);
  const double bits = cfg_.packet_bits();
  while (true) {
    int best = -1;
    std::size_t best_k = 0;
    double best_t = cfg_.dt;
    for (NodeId i = 0; i < n; ++i) {
      if (i == dest || done[i]) continue;
      auto& q = queues_[i];
      for (std::size_t k = 0; k < q.size(); ++k) {
        if (q[k].stalled) continue;
        if (relay_for(i, q[k].hops) < 0) {
          q[k].stalled = true;
          continue;
        }
        const double t = std::max(free_at[i], q[k].avail);
        if (t < best_t) {
          best = static_cast<int>(i);
          best_k = k;
          best_t = t;
        }
        break;
      }
    }
    if (best < 0) break;

    const auto i = static_cast<NodeId>(best);
    auto& q = queues_[i];
    Packet p = q[best_k];
    q.erase(q.begin() + static_cast<std::ptrdiff_t>(best_k));
    const auto j = static_cast<NodeId>(relay_for(i, p.hops));
    const double cap = topology_.capacity_of(i, j);
    const LinkFailure& fail = failure_of(i, j);
    const double need = bits - (p.progress_relay == static_cast<int>(j) ? p.progress_bits : 0.0);
    const double finish = best_t + need / cap;
    auto lose = [&] { ++(fail.by_blockage ? m_.dropped_blockage : m_.dropped_mobility); };

    if (finish > cfg_.dt) {
      done[i] = 1;
      if (fail.at) {
        lose();
      } else {
        p.progress_bits = bits - need + (cfg_.dt - best_t) * cap;
        p.progress_relay = static_cast<int>(j);
        q.insert(q.begin() + static_cast<std::ptrdiff_t>(best_k), p);
      }
      continue;
    }
    free_at[i] = finish;
    if (fail.at && finish > *fail.at) {
      lose();
      continue;
    }

    Packet next;
    next.gen_step = p.gen_step;
    next.hops = p.hops + 1;
    next.avail = finish;
    if (j == dest) {
      ++m_.delivered;
      m_.delivered_bits += bits;
      const double delay_steps = (world_.step - p.gen_step) + finish / cfg_.dt;
      m_.delay_per_hop_sum += delay_steps / static_cast<double>(next.hops);
    } else {
      auto& rq = queues_[j];
      auto at = std::upper_bound(rq.begin(), rq.end(), finish,
                                 [](double t, const Packet& x) { return t < x.avail; });
      rq.insert(at, next);
    }
  }
  end_of_step_holds();

  for (auto& s : world_.nodes) s.pos = clamp_to(advance(s, cfg_.dt, cfg_.kinematics).pos, cfg_.arena);
  for (auto& o : world_.obstacles) o.pos = clamp_to(advance(o, cfg_.dt, cfg_.kinematics).pos, cfg_.arena);
  ++world_.step;
  return world_.step < total;
}

void Simulation::run() {
  while (step()) {
  }
}

RunMetrics Simulation::metrics() const {
  RunMetrics m = m_;
  m.in_flight = 0;
  for (const auto& q : queues_) m.in_flight += q.size();
  m.elapsed_s = cfg_.horizon_steps * cfg_.dt;
  m.avg_throughput_bps = m.delivered_bits / m.elapsed_s;
  m.packet_loss_rate =
      m.packets_sent > 0 ? static_cast<double>(m.dropped()) / static_cast<double>(m.packets_sent) : 0.0;
  m.avg_delay_steps = m.delivered > 0 ? m.delay_per_hop_sum / static_cast<double>(m.delivered) : 0.0;
  return m;
}

RunMetrics run_replication(const ScenarioConfig& cfg, Policy policy, std::uint64_t seed,
                           std::function<void(const LinkAssessment&)> trace) {
  Simulation sim(cfg, policy, seed);
  if (trace) sim.set_trace(std::move(trace));
  sim.run();
  return sim.metrics();
}

std::vector<RunMetrics> run_replications_serial(const ScenarioConfig& cfg, Policy policy) {
  cfg.validate();
  std::vector<RunMetrics> out(static_cast<std::size_t>(cfg.runs));
  for (int r = 0; r < cfg.runs; ++r) {
    out[static_cast<std::size_t>(r)] =
        run_replication(cfg, policy, replication_seed(cfg.seed, static_cast<std::uint64_t>(r)));
  }
  return out;
}

std::vector<RunMetrics> run_replications_parallel(const ScenarioConfig& cfg, Policy policy,
                                                  int workers) {
  cfg.validate();
  std::vector<RunMetrics> out(static_cast<std::size_t>(cfg.runs));
#pragma omp parallel for schedule(dynamic) num_threads(std::max(workers, 1))
  for (int r = 0; r < cfg.runs; ++r) {
    out[static_cast<std::size_t>(r)] =
        run_replication(cfg, policy, replication_seed(cfg.seed, static_cast<std::uint64_t>(r)));
  }
  return out;
}

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::None: return "none";
    case SweepParam::K: return "K";
    case SweepParam::L: return "L";
    case SweepParam::VMax: return "v_max";
    case SweepParam::Dt: return "dt";
    case SweepParam::Load: return "load";
    case SweepParam::NNodes: return "n_nodes";
    case SweepParam::ObstacleVMax: return "obstacle_v_max";
  }
  return "unknown";
}

SweepParam parse_sweep_param(std::string_view name) {
  if (name == "K" || name == "n_dynamic") return SweepParam::K;
  if (name == "L" || name == "n_static") return SweepParam::L;
  if (name == "v_max") return SweepParam::VMax;
  if (name == "dt") return SweepParam::Dt;
  if (name == "load") return SweepParam::Load;
  if (name == "n_nodes") return SweepParam::NNodes;
  if (name == "obstacle_v_max") return SweepParam::ObstacleVMax;
  throw InvalidConfig("unknown sweep parameter '" + std::string(name) + "'");
}

ScenarioConfig apply_sweep_value(ScenarioConfig cfg, SweepParam p, double value) {
  switch (p) {
    case SweepParam::None: break;
    case SweepParam::K: cfg.n_dynamic = count_value(value, "K"); break;
    case SweepParam::L: cfg.n_static = count_value(value, "L"); break;
    case SweepParam::VMax: cfg.v_max = value; break;
    case SweepParam::Dt: cfg.dt = value; break;
    case SweepParam::Load: cfg.load = value; break;
    case SweepParam::NNodes: cfg.n_nodes = count_value(value, "n_nodes"); break;
    case SweepParam::ObstacleVMax: cfg.obstacle_v_max = value; break;
  }
  cfg.validate();
  return cfg;
}

ResultRow aggregate(std::span<const RunMetrics> reps) {
  ResultRow row;
  row.runs = static_cast<int>(reps.size());
  RunMetrics& t = row.totals;
  double throughput_sum = 0.0;
  for (const auto& m : reps) {
    t.packets_sent += m.packets_sent;
    t.delivered += m.delivered;
    t.dropped_mobility += m.dropped_mobility;
    t.dropped_blockage += m.dropped_blockage;
    t.dropped_nocand += m.dropped_nocand;
    t.in_flight += m.in_flight;
    t.delivered_bits += m.delivered_bits;
    t.delay_per_hop_sum += m.delay_per_hop_sum;
    t.elapsed_s += m.elapsed_s;
    throughput_sum += m.avg_throughput_bps;
    row.loss_per_run.push_back(m.packet_loss_rate);
    row.throughput_per_run.push_back(m.avg_throughput_bps);
  }
  if (!reps.empty()) t.avg_throughput_bps = throughput_sum / static_cast<double>(reps.size());
  t.packet_loss_rate =
      t.packets_sent > 0 ? static_cast<double>(t.dropped()) / static_cast<double>(t.packets_sent) : 0.0;
  t.avg_delay_steps = t.delivered > 0 ? t.delay_per_hop_sum / static_cast<double>(t.delivered) : 0.0;
  return row;
}

std::vector<ResultRow> run_experiment(const ScenarioConfig& cfg, const Sweep& sweep,
                                      std::span<const Policy> policies, int workers) {
  cfg.validate();
  std::vector<double> values = sweep.values;
  if (sweep.param == SweepParam::None || values.empty()) values = {0.0};
  const SweepParam param = sweep.param;

  std::vector<ScenarioConfig> points;
  points.reserve(values.size());
  for (double v : values) points.push_back(apply_sweep_value(cfg, param, v));

  const std::size_t runs = static_cast<std::size_t>(cfg.runs);
  const std::size_t n_pol = policies.size();
  const std::size_t n_tasks = points.size() * n_pol * runs;
  std::vector<RunMetrics> results(n_tasks);

  auto task = [&](std::size_t idx) {
    const std::size_t r = idx % runs;
    const std::size_t pol = (idx / runs) % n_pol;
    const std::size_t pt = idx / (runs * n_pol);
    // The replication seed ignores policy and sweep value: common random numbers.
    results[idx] = run_replication(points[pt], policies[pol], replication_seed(cfg.seed, r));
  };

  if (workers <= 1) {
    for (std::size_t idx = 0; idx < n_tasks; ++idx) task(idx);
  } else {
    const auto n = static_cast<std::int64_t>(n_tasks);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (std::int64_t idx = 0; idx < n; ++idx) task(static_cast<std::size_t>(idx));
  }

  std::vector<ResultRow> rows;
  rows.reserve(points.size() * n_pol);
  for (std::size_t pt = 0; pt < points.size(); ++pt) {
    for (std::size_t pol = 0; pol < n_pol; ++pol) {
      const std::size_t base = (pt * n_pol + pol) * runs;
      ResultRow row = aggregate(std::span<const RunMetrics>(results).subspan(base, runs));
      row.sweep_param = param;
      row.sweep_value = param == SweepParam::None ? 0.0 : values[pt];
      row.policy = policies[pol];
      row.seed = cfg.seed;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace mmrelay
