#pragma once

// Payload analysis of a dense network filling a disk around a central sink.
//
// Everything is a function of the radius B of a node. Packet forwarding moves
// traffic inward one hop of length A0 at a time; CB/CT lets a node reach the
// sink directly at the price of recruiting N_CB/CT(B) transmitters. The joint
// scheme mixes the two with probability P_r(B) and minimises the heaviest
// per-node payload.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wsnlife/coop_mode.hpp"
#include "wsnlife/errors.hpp"
#include "wsnlife/linkmodel.hpp"

namespace wsnlife::disk {

// Relative slack when comparing an achieved gain with its target, so that a
// gain of N - 1e-9 counts as N.
inline constexpr double kGainTolerance = 1e-6;

struct DiskScenario {
  double outer_radius = 10.0;   // B0
  double direct_range = 1.0;    // A0
  double alpha = 4.0;
  double density = 100.0;       // rho, nodes per unit area
  double wavelength = 0.125;
  link::ChannelParams channel = link::ChannelParams::defaults();
  double delta_b = 0.05;        // radial grid step
  CoopMode mode = CoopMode::CT;

  std::size_t grid_size() const {
    return static_cast<std::size_t>(std::llround(outer_radius / delta_b));
  }

  void validate() const {
    if (!(delta_b > 0.0)) throw DomainError("disk: delta_b must be > 0");
    if (!(delta_b < direct_range)) throw DomainError("disk: delta_b must be smaller than A0");
    if (!(direct_range <= outer_radius)) throw DomainError("disk: A0 must not exceed B0");
    if (!(density > 0.0)) throw DomainError("disk: density must be > 0");
    if (!(alpha >= 1.0)) throw DomainError("disk: alpha must be >= 1");
    if (!(wavelength > 0.0)) throw DomainError("disk: wavelength must be > 0");
    const double steps = outer_radius / delta_b;
    if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps))
      throw DomainError("disk: B0 must be an integer multiple of delta_b");
    if (mode == CoopMode::CT) channel.validate();
  }

  // Scenario with B0 = multiple * A0 and a grid of `steps` points.
  static DiskScenario with_size(double multiple, double a0 = 1.0, std::size_t steps = 200) {
    DiskScenario s;
    s.direct_range = a0;
    s.outer_radius = multiple * a0;
    s.delta_b = s.outer_radius / static_cast<double>(steps);
    return s;
  }
};

struct DiskProfile {
  std::vector<double> grid;
  std::vector<double> n_pf;
  std::vector<long> n_cbct;
  std::vector<double> p_r;
  std::vector<double> n_joint;
  double kappa = 0.0;
};

struct DiskSummary {
  double outer_radius = 0.0;
  double max_n_joint = 0.0;
  double max_n_pf = 0.0;
  double saving_pct = 0.0;
};

namespace detail {

inline long hop_count(double b, const DiskScenario& s) {
  return static_cast<long>(std::floor((s.outer_radius - b) / s.direct_range + 1e-9));
}

// Grid index nearest to radius b (grid point i sits at (i + 1) delta_b).
inline std::size_t nearest_index(double b, const DiskScenario& s, std::size_t n) {
  const long idx = std::lround(b / s.delta_b) - 1;
  return static_cast<std::size_t>(std::clamp<long>(idx, 0, static_cast<long>(n) - 1));
}

// Packets a node at grid point i transmits per own packet, before the
// CB/CT energy factor: its own plus those forwarded from outer rings that
// stayed on the forwarding path.
inline double forwarded_packets(std::size_t i, const std::vector<double>& grid,
                                const std::vector<double>& p_r, const DiskScenario& s) {
  const double b = grid[i];
  const long hops = hop_count(b, s);
  double total = 0.0;
  double survive = 1.0;
  for (long n = 0; n <= hops; ++n) {
    if (n > 0) survive *= 1.0 - p_r[nearest_index(b + static_cast<double>(n) * s.direct_range, s, grid.size())];
    total += (1.0 + static_cast<double>(n) * s.direct_range / b) * survive;
  }
  return total;
}

inline std::vector<double> make_grid(const DiskScenario& s) {
  std::vector<double> grid(s.grid_size());
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i + 1) * s.delta_b;
  return grid;
}

inline double range_factor(double b, const DiskScenario& s) {
  return std::pow(std::max(b / s.direct_range, 1.0), s.alpha);
}

}  // namespace detail

// Transmissions per node at radius b under pure packet forwarding.
inline double payload_pf(double b, const DiskScenario& s) {
  if (!(b > 0.0)) throw DomainError("payload_pf: radius must be > 0");
  if (b > s.outer_radius * (1.0 + 1e-12)) throw DomainError("payload_pf: radius beyond B0");
  const long hops = detail::hop_count(b, s);
  double total = 0.0;
  for (long n = 0; n <= hops; ++n) total += 1.0 + static_cast<double>(n) * s.direct_range / b;
  return total;
}

// Smallest beamforming group whose directivity bound reaches (B/A0)^alpha.
inline long nodes_needed_cb(double b, const DiskScenario& s) {
  if (!(b > 0.0)) throw DomainError("nodes_needed_cb: radius must be > 0");
  if (b <= s.direct_range) return 1;
  const double c0 = detail::range_factor(b, s);
  const double c1 = link::kBeamformingMu * s.wavelength * std::sqrt(s.density * std::numbers::pi);
  const double closed = 0.5 * (c0 * (2.0 + c0 * c1 * c1) + std::pow(c0, 1.5) * c1 * std::sqrt(4.0 + c0 * c1 * c1));

  auto reaches = [&](long n) {
    const double r = std::sqrt(static_cast<double>(n) / (s.density * std::numbers::pi));
    return link::cb_gain_lower_bound(n, r, s.wavelength) >= c0 * (1.0 - kGainTolerance);
  };
  long n = std::max(1L, static_cast<long>(std::ceil(closed)));
  while (n > 1 && reaches(n - 1)) --n;
  while (!reaches(n)) ++n;
  return n;
}

// Smallest CT group whose average gain reaches (B/A0)^alpha, or nullopt when
// the hypergeometric argument leaves its validity range first.
inline std::optional<long> nodes_needed_ct(double b, const DiskScenario& s) {
  if (!(b > 0.0)) throw DomainError("nodes_needed_ct: radius must be > 0");
  if (b <= s.direct_range) return 1;
  const double target = detail::range_factor(b, s) * (1.0 - kGainTolerance);

  enum class Probe { Reached, Short, Invalid };
  auto probe = [&](long n) {
    const double r = std::sqrt(static_cast<double>(n) / (s.density * std::numbers::pi));
    if (!(link::ct_taylor_argument(s.channel, r) < 1.0)) return Probe::Invalid;
    return link::ct_gain_analytic(s.channel, n, r) >= target ? Probe::Reached : Probe::Short;
  };

  constexpr long kMaxNodes = 1L << 40;
  long lo = 1;  // known short
  long hi = 2;
  for (;;) {
    const Probe p = probe(hi);
    if (p == Probe::Reached) break;
    if (p == Probe::Invalid || hi >= kMaxNodes) return std::nullopt;
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (probe(mid) == Probe::Reached)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

inline std::optional<long> nodes_needed(double b, const DiskScenario& s) {
  if (s.mode == CoopMode::CB) return nodes_needed_cb(b, s);
  return nodes_needed_ct(b, s);
}

// Joint payload for the P_r already stored in the profile.
inline std::vector<double> payload_joint(const DiskProfile& profile, const DiskScenario& s) {
  const std::size_t n = profile.grid.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = profile.p_r[i];
    const double energy = 1.0 - p + static_cast<double>(profile.n_cbct[i]) * p;
    out[i] = energy * detail::forwarded_packets(i, profile.grid, profile.p_r, s);
  }
  return out;
}

// Profile skeleton: grid, forwarding payload and CB/CT group sizes, P_r = 0.
inline DiskProfile forwarding_profile(const DiskScenario& s) {
  s.validate();
  DiskProfile prof;
  prof.grid = detail::make_grid(s);
  const std::size_t n = prof.grid.size();
  prof.n_pf.resize(n);
  prof.n_cbct.resize(n);
  prof.p_r.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prof.n_pf[i] = payload_pf(prof.grid[i], s);
    const auto need = nodes_needed(prof.grid[i], s);
    if (!need) {
      std::ostringstream msg;
      msg << "CB/CT cannot reach the sink from radius B = " << prof.grid[i]
          << ": the group disk grows past the range where the CT gain formula holds";
      throw ModelError(msg.str());
    }
    prof.n_cbct[i] = *need;
  }
  prof.n_joint = prof.n_pf;
  prof.kappa = *std::max_element(prof.n_pf.begin(), prof.n_pf.end());
  return prof;
}

// Inner sweep for a fixed temperature: from B0 inward, choose the largest
// P_r(B) in [0, 1] that keeps N_joint(B) <= kappa. Returns true when every
// grid point meets the bound.
inline bool sweep_temperature(double kappa, DiskProfile& prof, const DiskScenario& s) {
  const std::size_t n = prof.grid.size();
  bool feasible = true;
  for (std::size_t k = n; k-- > 0;) {
    const double forwarded = detail::forwarded_packets(k, prof.grid, prof.p_r, s);
    const double group = static_cast<double>(prof.n_cbct[k]);
    double p = 1.0;
    if (group > 1.0) p = std::clamp((kappa / forwarded - 1.0) / (group - 1.0), 0.0, 1.0);
    prof.p_r[k] = p;
    prof.n_joint[k] = (1.0 - p + group * p) * forwarded;
    if (prof.n_joint[k] > kappa * (1.0 + 1e-12)) feasible = false;
  }
  return feasible;
}

// Bisection on the temperature kappa between 1 and the worst forwarding
// payload; stops once the bracket is narrower than 1e-4 kappa.
inline DiskProfile optimize_joint(const DiskScenario& s) {
  DiskProfile prof = forwarding_profile(s);
  double lo = 1.0;
  double hi = prof.kappa;
  if (sweep_temperature(lo, prof, s)) {
    prof.kappa = lo;
    return prof;
  }
  while (hi - lo > 1e-4 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (sweep_temperature(mid, prof, s))
      hi = mid;
    else
      lo = mid;
  }
  sweep_temperature(hi, prof, s);
  prof.kappa = hi;
  return prof;
}

inline DiskSummary summarize(const DiskProfile& prof, double outer_radius) {
  DiskSummary out;
  out.outer_radius = outer_radius;
  out.max_n_joint = *std::max_element(prof.n_joint.begin(), prof.n_joint.end());
  out.max_n_pf = *std::max_element(prof.n_pf.begin(), prof.n_pf.end());
  out.saving_pct = 100.0 * (1.0 - out.max_n_joint / out.max_n_pf);
  return out;
}

}  // namespace wsnlife::disk
