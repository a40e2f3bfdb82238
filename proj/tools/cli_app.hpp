#pragma once

// Command-line front end. `run` takes the argument vector (without the
// program name) and returns the process exit code:
//   0 success, 1 usage or configuration error, 2 infeasible model.
// Every table goes to <out>/<name>.csv or <out>/<name>.json.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wsnlife/coop_mode.hpp"
#include "wsnlife/diskcase.hpp"
#include "wsnlife/dynrouting.hpp"
#include "wsnlife/errors.hpp"
#include "wsnlife/lifetime_lp.hpp"
#include "wsnlife/linkmodel.hpp"
#include "wsnlife/network.hpp"
#include "wsnlife/scenario_io.hpp"

namespace wsnlife::cli {

namespace fs = std::filesystem;

// ---- tables -------------------------------------------------------------

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("table " + name + ": row width mismatch");
    rows.push_back(std::move(row));
  }
};

// Shortest text that reads back to the same double; never locale dependent.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t j = 0; j < t.columns.size(); ++j) out += (j ? "," : "") + t.columns[j];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + cell_text(row[j]);
    out += "\n";
  }
  return out;
}

inline std::string to_json(const Table& t) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const Cell& c = row[j];
      if (const auto* d = std::get_if<double>(&c))
        obj[t.columns[j]] = std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(format_number(*d));
      else if (const auto* i = std::get_if<long long>(&c))
        obj[t.columns[j]] = *i;
      else
        obj[t.columns[j]] = std::get<std::string>(c);
    }
    doc.push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

// Writes through a temporary name and renames, so readers never see a
// half-written file.
inline void write_file(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError("cannot write " + tmp.string());
    f << content;
    if (!f) throw DomainError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

// ---- run configuration --------------------------------------------------

struct ChannelOverrides {
  std::optional<double> tx_dbm, noise_dbm, gamma0_db, alpha, wavelength;
  std::optional<int> packet_len;

  link::ChannelParams apply(link::ChannelParams p) const {
    if (tx_dbm) p.tx_power = link::dbm_to_watt(*tx_dbm);
    if (noise_dbm) p.noise = link::dbm_to_watt(*noise_dbm);
    if (gamma0_db) p.gamma0 = link::db_to_linear(*gamma0_db);
    if (alpha) p.alpha = *alpha;
    if (wavelength) p.wavelength = *wavelength;
    if (packet_len) p.packet_len = *packet_len;
    p.validate();
    return p;
  }
};

struct RunConfig {
  std::string subcommand;
  std::string scenario;
  std::string gen;  // "L,n,sinks"
  std::uint64_t seed = 1;
  std::string mode = "ct";
  std::string out = ".";
  std::string format = "csv";
  ChannelOverrides channel;

  // ct-gain / cb-gain
  long trials = 0;  // 0 picks the subcommand default
  std::vector<long> nodes;
  double target = 1000.0;
  std::vector<double> r_grid;
  std::vector<double> r_over_lambda;
  std::size_t grid_points = 2048;

  // disk
  std::optional<double> b0;
  std::optional<double> delta_b;
  double a0 = 1.0;
  double density = 100.0;
  double disk_alpha = 4.0;
  bool no_cbct = false;

  // lp
  bool dump_lp = false;

  // dynsim / sweep
  double dt = 0.005;
  double beta1 = 1.0;
  double beta2 = 1.0;
  double horizon = 10.0;
  std::string policy = "cbct";
  double side = 100.0;
  long reps = 20;
  std::vector<long> node_counts{10, 20, 30, 40};
  std::vector<double> beta1_grid{0.1, 1.0, 10.0};
  std::vector<double> ratios{0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
  long ratio_nodes = 20;
};

struct Context {
  RunConfig cfg;
  std::ostream& out;
};

inline void emit(const Context& ctx, const Table& t) {
  const fs::path dir(ctx.cfg.out);
  fs::create_directories(dir);
  if (ctx.cfg.format == "json")
    write_file(dir / (t.name + ".json"), to_json(t));
  else
    write_file(dir / (t.name + ".csv"), to_csv(t));
}

inline CoopMode mode_of(const RunConfig& c) { return parse_coop_mode(c.mode); }

struct GenSpec {
  double side = 0.0;
  int nodes = 0;
  int sinks = 1;
};

inline GenSpec parse_gen(const std::string& text) {
  GenSpec g;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() < 2 || parts.size() > 3) throw DomainError("--gen expects \"L,n\" or \"L,n,sinks\"");
  try {
    std::size_t used = 0;
    g.side = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("");
    g.nodes = std::stoi(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("");
    if (parts.size() == 3) {
      g.sinks = std::stoi(parts[2], &used);
      if (used != parts[2].size()) throw std::invalid_argument("");
    }
  } catch (const std::logic_error&) {
    throw DomainError("--gen: cannot parse \"" + text + "\"");
  }
  return g;
}

// Scenario from --scenario or --gen; edges are built from positions when the
// document has none.
inline net::Network load_network(const RunConfig& c) {
  if (c.scenario.empty() == c.gen.empty()) throw DomainError("give exactly one of --scenario and --gen");
  if (!c.gen.empty()) {
    const GenSpec g = parse_gen(c.gen);
    const auto params = c.channel.apply(link::ChannelParams::defaults());
    return net::build_edges(net::generate_random(g.side, g.nodes, g.sinks, c.seed, params), mode_of(c));
  }
  io::Scenario sc = io::load_scenario(c.scenario);
  sc.network.params = c.channel.apply(sc.network.params);
  if (!sc.has_edges) return net::build_edges(std::move(sc.network), mode_of(c));
  return sc.network;
}

// ---- subcommands --------------------------------------------------------

inline std::vector<double> default_r_grid() { return {1, 5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100}; }

inline void cmd_ct_gain(const Context& ctx) {
  const auto& c = ctx.cfg;
  const auto p = c.channel.apply(link::ChannelParams::defaults());
  const long trials = c.trials ? c.trials : 100000;
  const long n = c.nodes.empty() ? 10 : c.nodes.front();
  const auto grid = c.r_grid.empty() ? default_r_grid() : c.r_grid;
  Table t{"ct_gain", {"R", "analytic_dn", "montecarlo_dn", "std_error"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double analytic = link::ct_gain_analytic(p, n, r) / static_cast<double>(n);
    const auto mc = link::ct_gain_montecarlo(p, n, r, c.target, trials, c.seed + i);
    const double k = static_cast<double>(n);
    t.add({r, analytic, mc.mean / k, mc.std_error / k});
  }
  emit(ctx, t);
  ctx.out << "ct-gain: " << grid.size() << " radii, N = " << n << ", " << trials << " trials each\n";
}

inline void cmd_cb_gain(const Context& ctx) {
  const auto& c = ctx.cfg;
  const auto p = c.channel.apply(link::ChannelParams::defaults());
  const long placements = c.trials ? c.trials : 200;
  const std::vector<long> counts = c.nodes.empty() ? std::vector<long>{10, 50, 100} : c.nodes;
  const std::vector<double> ratios =
      c.r_over_lambda.empty() ? std::vector<double>{1, 2, 5, 10, 20, 50, 100} : c.r_over_lambda;
  Table t{"cb_gain", {"N", "R_over_lambda", "R", "bound_dn", "montecarlo_dn", "std_error"}, {}};
  std::uint64_t stream = 0;
  for (long n : counts)
    for (double q : ratios) {
      const double r = q * p.wavelength;
      const double k = static_cast<double>(n);
      const double bound = link::cb_gain_lower_bound(n, r, p.wavelength) / k;
      const auto mc = link::cb_directivity_montecarlo(n, r, p.wavelength, placements, c.seed + stream++, c.grid_points);
      t.add({static_cast<long long>(n), q, r, bound, mc.mean / k, mc.std_error / k});
    }
  emit(ctx, t);
  ctx.out << "cb-gain: " << t.rows.size() << " rows, " << placements << " placements each\n";
}

inline std::string radius_tag(double b) {
  std::string s = format_number(b);
  for (char& ch : s)
    if (ch == '.') ch = 'p';
  return s;
}

inline void cmd_disk(const Context& ctx) {
  const auto& c = ctx.cfg;
  std::vector<double> radii;
  if (c.b0)
    radii.push_back(*c.b0);
  else
    for (double k : {2.0, 4.0, 6.0, 8.0, 10.0}) radii.push_back(k * c.a0);

  Table summary{"disk_summary", {"B0", "max_n_joint", "max_n_pf", "saving_pct"}, {}};
  for (double b0 : radii) {
    disk::DiskScenario s;
    s.outer_radius = b0;
    s.direct_range = c.a0;
    s.alpha = c.disk_alpha;
    s.density = c.density;
    s.channel = c.channel.apply(link::ChannelParams::defaults());
    s.wavelength = s.channel.wavelength;
    s.delta_b = c.delta_b ? *c.delta_b : b0 / 200.0;
    s.mode = mode_of(c);
    const disk::DiskProfile prof = c.no_cbct ? disk::forwarding_profile(s) : disk::optimize_joint(s);
    Table t{"disk_profile_b" + radius_tag(b0), {"B", "n_pf", "n_cbct", "p_r", "n_joint"}, {}};
    for (std::size_t i = 0; i < prof.grid.size(); ++i)
      t.add({prof.grid[i], prof.n_pf[i], static_cast<long long>(prof.n_cbct[i]), prof.p_r[i], prof.n_joint[i]});
    emit(ctx, t);
    const auto sm = disk::summarize(prof, b0);
    summary.add({b0, sm.max_n_joint, sm.max_n_pf, sm.saving_pct});
    ctx.out << "disk: B0 = " << format_number(b0) << " saving " << format_number(sm.saving_pct) << "%\n";
  }
  emit(ctx, summary);
}

inline Table flow_table(const std::string& name, const net::Network& net, const net::FlowSolution& sol) {
  Table t{name, {"src", "dst", "kind", "helpers", "flow"}, {}};
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const auto& edge = net.edges[e];
    std::string helpers;
    for (std::size_t k = 0; k < edge.helpers.size(); ++k) helpers += (k ? ";" : "") + std::to_string(edge.helpers[k]);
    t.add({static_cast<long long>(edge.src), static_cast<long long>(edge.dst), net::to_string(edge.kind), helpers,
           sol.qhat.empty() ? 0.0 : sol.qhat[e]});
  }
  return t;
}

inline void print_audit(std::ostream& os, const std::string& label, const net::Network& net, const net::FlowSolution& sol) {
  if (!std::isfinite(sol.lifetime)) {
    os << "audit " << label << ": no traffic, lifetime infinite\n";
    return;
  }
  const auto a = lifetime::audit(net, sol);
  os << "audit " << label << ": energy excess " << format_number(a.max_energy_excess) << ", conservation error "
     << format_number(a.max_conservation_error) << ", min flow " << format_number(a.min_negative_flow) << " -> "
     << (a.ok ? "ok" : "FAILED") << "\n";
}

inline void cmd_lp(const Context& ctx) {
  const auto& c = ctx.cfg;
  const net::Network net = load_network(c);
  const net::Network plain = net.without_cbct();
  if (c.dump_lp) {
    fs::create_directories(c.out);
    write_file(fs::path(c.out) / "lp_cbct.txt", lifetime::formulate(net).problem.dump());
    if (net::unreachable_origins(plain).empty())
      write_file(fs::path(c.out) / "lp_direct.txt", lifetime::formulate(plain).problem.dump());
  }
  const auto g = lifetime::lifetime_gain(net);

  emit(ctx, flow_table("lp_flow_cbct", net, g.with_cbct.flow));
  emit(ctx, flow_table("lp_flow_direct", plain, g.without_cbct.flow));

  Table energy{"lp_energy", {"node_id", "use_direct", "use_cbct"}, {}};
  const auto use_with = net::node_energy_use(net, g.with_cbct.flow.qhat);
  const auto use_without = net::node_energy_use(plain, g.without_cbct.flow.qhat);
  for (std::size_t i = 0; i < net.size(); ++i)
    energy.add({static_cast<long long>(net.nodes[i].id), use_without[i], use_with[i]});
  emit(ctx, energy);

  Table summary{"lp_summary", {"T_direct", "T_cbct", "gain_pct"}, {}};
  summary.add({g.without_cbct.flow.lifetime, g.with_cbct.flow.lifetime, 100.0 * g.gain});
  emit(ctx, summary);

  ctx.out << "lp: T without CB/CT = " << format_number(g.without_cbct.flow.lifetime)
          << ", with CB/CT = " << format_number(g.with_cbct.flow.lifetime) << ", gain "
          << format_number(100.0 * g.gain) << "%\n";
  print_audit(ctx.out, "cbct", net, g.with_cbct.flow);
  if (g.without_cbct.flow.lifetime > 0.0) print_audit(ctx.out, "direct", plain, g.without_cbct.flow);
}

inline dyn::RoutingPolicy parse_policy(const std::string& s) {
  if (s == "cbct") return dyn::RoutingPolicy::Cooperative;
  if (s == "residual") return dyn::RoutingPolicy::ResidualEnergy;
  if (s == "hop") return dyn::RoutingPolicy::HopCount;
  throw DomainError("unknown policy '" + s + "' (expected cbct, residual or hop)");
}

inline dyn::SimConfig sim_config(const RunConfig& c) {
  dyn::SimConfig s;
  s.cost.beta1 = c.beta1;
  s.cost.beta2 = c.beta2;
  s.dt = c.dt;
  s.horizon = c.horizon;
  s.seed = c.seed;
  s.policy = parse_policy(c.policy);
  s.validate();
  return s;
}

inline void cmd_dynsim(const Context& ctx) {
  const auto& c = ctx.cfg;
  net::Network net = load_network(c);
  if (c.no_cbct) net = net.without_cbct();
  const dyn::SimConfig sc = sim_config(c);
  const dyn::SimTrace tr = dyn::simulate(net, sc);

  Table energy{"dynsim_energy", {"time", "node_id", "energy_remaining"}, {}};
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    for (std::size_t i = 0; i < net.size(); ++i)
      energy.add({tr.times[k], static_cast<long long>(net.nodes[i].id), tr.energy[k][i]});
  emit(ctx, energy);

  Table cost{"dynsim_cost", {"time", "src", "dst", "kind", "cost"}, {}};
  for (std::size_t k = 0; k < tr.cost.size(); ++k)
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
      if (std::isnan(tr.cost[k][e])) continue;
      const auto& edge = net.edges[e];
      cost.add({tr.times[k], static_cast<long long>(edge.src), static_cast<long long>(edge.dst), net::to_string(edge.kind),
                tr.cost[k][e]});
    }
  emit(ctx, cost);

  Table events{"dynsim_events", {"time", "node_id", "event"}, {}};
  for (const auto& ev : tr.events) events.add({ev.time, static_cast<long long>(ev.node), ev.what});
  emit(ctx, events);

  Table summary{"dynsim_summary", {"first_failure_time", "failed_node", "lifetime", "steps", "max_audit_error"}, {}};
  summary.add({tr.first_failure_time, static_cast<long long>(tr.failed_node), tr.lifetime(sc.horizon),
               static_cast<long long>(tr.times.size() - 1), tr.max_audit_error});
  emit(ctx, summary);

  ctx.out << "dynsim: lifetime " << format_number(tr.lifetime(sc.horizon));
  if (tr.failed_node) ctx.out << " (node " << tr.failed_node << " failed first)";
  ctx.out << "\n";
}

// `count` random networks of n sensors and one sink whose origins all reach
// the sink over direct links; candidate seeds run upward from `seed`.
inline std::vector<net::Network> sweep_networks(const RunConfig& c, long n, long count) {
  const auto params = c.channel.apply(link::ChannelParams::defaults());
  std::vector<net::Network> nets;
  const std::uint64_t limit = c.seed + static_cast<std::uint64_t>(100 * count);
  for (std::uint64_t s = c.seed; s < limit && static_cast<long>(nets.size()) < count; ++s) {
    auto nw = net::build_edges(net::generate_random(c.side, static_cast<int>(n), 1, s, params), mode_of(c));
    if (net::unreachable_origins(nw.without_cbct()).empty()) nets.push_back(std::move(nw));
  }
  if (static_cast<long>(nets.size()) < count)
    throw ModelError("sweep: found only " + std::to_string(nets.size()) + " connected networks with " +
                     std::to_string(n) + " nodes");
  return nets;
}

inline void cmd_sweep(const Context& ctx) {
  const auto& c = ctx.cfg;
  dyn::SimConfig base = sim_config(c);

  Table by_nodes{"sweep_nodes",
                 {"n", "reps", "shortest_path", "residual_energy", "cbct", "improvement_pct"}, {}};
  for (long n : c.node_counts) {
    const auto nets = sweep_networks(c, n, c.reps);
    const auto sum = dyn::compare_baselines(nets, base);
    by_nodes.add({static_cast<long long>(n), static_cast<long long>(c.reps), sum.mean.shortest_path,
                  sum.mean.residual_energy, sum.mean.cooperative, sum.improvement_pct});
    ctx.out << "sweep: n = " << n << " improvement " << format_number(sum.improvement_pct) << "%\n";
  }
  emit(ctx, by_nodes);

  Table by_beta{"sweep_beta", {"beta1", "ratio", "beta2", "reps", "residual_energy", "cbct", "improvement_pct"}, {}};
  const auto nets = sweep_networks(c, c.ratio_nodes, c.reps);
  for (double b1 : c.beta1_grid)
    for (double ratio : c.ratios) {
      dyn::SimConfig sc = base;
      sc.cost.beta1 = b1;
      sc.cost.beta2 = b1 * ratio;
      sc.validate();
      const auto sum = dyn::compare_baselines(nets, sc);
      by_beta.add({b1, ratio, sc.cost.beta2, static_cast<long long>(c.reps), sum.mean.residual_energy,
                   sum.mean.cooperative, sum.improvement_pct});
    }
  emit(ctx, by_beta);
}

inline void cmd_gen(const Context& ctx) {
  const auto& c = ctx.cfg;
  if (c.gen.empty()) throw DomainError("gen needs --gen \"L,n,sinks\"");
  const net::Network net = load_network(c);
  fs::create_directories(c.out);
  write_file(fs::path(c.out) / "scenario.json", io::serialize(net, true, "generated: " + c.gen + ", seed " + std::to_string(c.seed)));
  ctx.out << "gen: " << net.size() << " nodes, " << net.count_edges(net::EdgeKind::Direct) << " direct and "
          << net.count_edges(net::EdgeKind::CbCt) << " CB/CT edges\n";
}

// ---- argument parsing ---------------------------------------------------

inline void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--mode", c.mode, "cb or ct")->check(CLI::IsMember({"cb", "ct", "CB", "CT"}));
  sub->add_option("--tx-dbm", c.channel.tx_dbm, "transmit power [dBm]");
  sub->add_option("--noise-dbm", c.channel.noise_dbm, "noise power [dBm]");
  sub->add_option("--gamma0-db", c.channel.gamma0_db, "SNR threshold [dB]");
  sub->add_option("--alpha", c.channel.alpha, "path-loss exponent");
  sub->add_option("--wavelength", c.channel.wavelength, "carrier wavelength [m]");
  sub->add_option("--packet-len", c.channel.packet_len, "packet length [bits]");
}

inline void add_network_source(CLI::App* sub, RunConfig& c) {
  sub->add_option("--scenario", c.scenario, "scenario JSON file");
  sub->add_option("--gen", c.gen, "random network \"L,n,sinks\"");
}

inline void add_sim(CLI::App* sub, RunConfig& c) {
  sub->add_option("--dt", c.dt, "time step and route update period")->check(CLI::PositiveNumber);
  sub->add_option("--beta1", c.beta1, "cost exponent of the transmitter")->check(CLI::PositiveNumber);
  sub->add_option("--beta2", c.beta2, "cost exponent of helpers")->check(CLI::NonNegativeNumber);
  sub->add_option("--horizon", c.horizon, "simulation end time")->check(CLI::PositiveNumber);
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig c;
  CLI::App app{"Lifetime analysis of sensor networks with collaborative beamforming and cooperative transmission",
               "wsnlife"};
  app.require_subcommand(1);

  auto* ct = app.add_subcommand("ct-gain", "CT gain per node versus group radius");
  add_common(ct, c);
  ct->add_option("--trials", c.trials, "Monte Carlo trials per radius")->check(CLI::PositiveNumber);
  ct->add_option("--nodes", c.nodes, "cooperating nodes N")->check(CLI::PositiveNumber)->delimiter(',');
  ct->add_option("--target", c.target, "destination distance A [m]")->check(CLI::PositiveNumber);
  ct->add_option("--r-grid", c.r_grid, "group radii [m]")->delimiter(',')->check(CLI::PositiveNumber);

  auto* cb = app.add_subcommand("cb-gain", "CB directivity per node versus group radius");
  add_common(cb, c);
  cb->add_option("--trials", c.trials, "random placements per point")->check(CLI::PositiveNumber);
  cb->add_option("--nodes", c.nodes, "beamforming group sizes")->delimiter(',')->check(CLI::PositiveNumber);
  cb->add_option("--r-lambda", c.r_over_lambda, "radii in wavelengths")->delimiter(',')->check(CLI::PositiveNumber);
  cb->add_option("--grid-points", c.grid_points, "angular grid size")->check(CLI::Range(16, 1 << 20));

  auto* dk = app.add_subcommand("disk", "joint forwarding/CB/CT payload on a disk");
  add_common(dk, c);
  dk->add_option("--b0", c.b0, "disk radius (default sweep 2..10 A0)")->check(CLI::PositiveNumber);
  dk->add_option("--delta-b", c.delta_b, "radial grid step (default B0/200)")->check(CLI::PositiveNumber);
  dk->add_option("--a0", c.a0, "direct range A0")->check(CLI::PositiveNumber);
  dk->add_option("--density", c.density, "node density per unit area")->check(CLI::PositiveNumber);
  dk->add_option("--disk-alpha", c.disk_alpha, "path-loss exponent of the payload model")->check(CLI::PositiveNumber);
  dk->add_flag("--no-cbct", c.no_cbct, "force P_r = 0 (pure forwarding)");

  auto* lpc = app.add_subcommand("lp", "max-min lifetime LP with and without CB/CT");
  add_common(lpc, c);
  add_network_source(lpc, c);
  lpc->add_flag("--dump-lp", c.dump_lp, "write the LP rows as text");

  auto* ds = app.add_subcommand("dynsim", "dynamic routing simulation with energy traces");
  add_common(ds, c);
  add_network_source(ds, c);
  add_sim(ds, c);
  ds->add_option("--policy", c.policy, "cbct, residual or hop")->check(CLI::IsMember({"cbct", "residual", "hop"}));
  ds->add_flag("--no-cbct", c.no_cbct, "drop CB/CT edges");

  auto* sw = app.add_subcommand("sweep", "baseline comparison over node counts and beta ratios");
  add_common(sw, c);
  add_sim(sw, c);
  sw->add_option("--side", c.side, "square side L [m]")->check(CLI::PositiveNumber);
  sw->add_option("--reps", c.reps, "random networks per point")->check(CLI::PositiveNumber);
  sw->add_option("--nodes", c.node_counts, "node counts")->delimiter(',')->check(CLI::PositiveNumber);
  sw->add_option("--beta1-grid", c.beta1_grid, "beta1 values for the ratio sweep")->delimiter(',')->check(CLI::PositiveNumber);
  sw->add_option("--ratios", c.ratios, "beta2/beta1 ratios")->delimiter(',')->check(CLI::NonNegativeNumber);
  sw->add_option("--ratio-nodes", c.ratio_nodes, "node count for the ratio sweep")->check(CLI::PositiveNumber);

  auto* gn = app.add_subcommand("gen", "write a random scenario document");
  add_common(gn, c);
  gn->add_option("--gen", c.gen, "random network \"L,n,sinks\"")->required();

  std::vector<std::string> storage{"wsnlife"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  Context ctx{c, out};
  try {
    if (ct->parsed()) cmd_ct_gain(ctx);
    else if (cb->parsed()) cmd_cb_gain(ctx);
    else if (dk->parsed()) cmd_disk(ctx);
    else if (lpc->parsed()) cmd_lp(ctx);
    else if (ds->parsed()) cmd_dynsim(ctx);
    else if (sw->parsed()) cmd_sweep(ctx);
    else if (gn->parsed()) cmd_gen(ctx);
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace wsnlife::cli
