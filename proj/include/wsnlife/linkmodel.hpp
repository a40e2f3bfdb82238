#pragma once

// Physical-layer link quantities: direct SNR and range, the collaborative
// beamforming (CB) directivity bound and its Monte Carlo check, and the
// cooperative transmission (CT) gain in closed form and by simulation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wsnlife/errors.hpp"

namespace wsnlife::link {

// Constant of the far-field CB directivity lower bound.
inline constexpr double kBeamformingMu = 0.09332;

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Radio constants shared by every gain formula. All fields are linear units;
// use from_config() to build from the usual dBm / dB configuration values.
struct ChannelParams {
  double tx_power = 0.01;     // W
  double noise = 1e-10;       // W
  double alpha = 4.0;         // path-loss exponent
  double wavelength = 0.125;  // m
  int packet_len = 100;       // symbols per packet
  double gamma0 = 10.0;       // minimum SNR, linear
  double c0 = 1.0;            // antenna constant

  static ChannelParams from_config(double tx_power_dbm, double noise_dbm, double alpha,
                                   double wavelength, int packet_len, double gamma0_db) {
    ChannelParams p;
    p.tx_power = dbm_to_watt(tx_power_dbm);
    p.noise = dbm_to_watt(noise_dbm);
    p.alpha = alpha;
    p.wavelength = wavelength;
    p.packet_len = packet_len;
    p.gamma0 = db_to_linear(gamma0_db);
    p.validate();
    return p;
  }

  // 10 dBm transmit power, -70 dBm noise, alpha 4, 10 dB threshold,
  // 100-symbol packets, 2.4 GHz carrier.
  static ChannelParams defaults() { return from_config(10.0, -70.0, 4.0, 0.125, 100, 10.0); }

  void validate() const {
    if (!(tx_power > 0.0)) throw DomainError("tx_power must be > 0");
    if (!(noise > 0.0)) throw DomainError("noise must be > 0");
    if (!(alpha >= 1.0)) throw DomainError("alpha must be >= 1");
    if (!(wavelength > 0.0)) throw DomainError("wavelength must be > 0");
    if (packet_len < 1) throw DomainError("packet_len must be >= 1");
    if (!(gamma0 > 0.0)) throw DomainError("gamma0 must be > 0");
  }
};

// Disk of cooperating nodes around a transmitter.
struct DiskGeometry {
  double radius = 0.0;           // R, m
  double density = 0.0;          // rho, nodes per m^2
  double target_distance = 0.0;  // A, m

  void validate() const {
    if (!(radius > 0.0)) throw DomainError("disk radius must be > 0");
    if (!(density > 0.0)) throw DomainError("node density must be > 0");
    if (!(target_distance > radius)) throw DomainError("target must lie outside the disk (A > R)");
  }
};

// SNR of a single transmitter at `distance` with channel power gain `fade_power`.
inline double snr_direct(const ChannelParams& p, double distance, double fade_power = 1.0) {
  if (!(distance > 0.0)) throw DomainError("snr_direct: distance must be > 0");
  if (fade_power < 0.0) throw DomainError("snr_direct: fade power must be >= 0");
  return p.tx_power * p.c0 * std::pow(distance, -p.alpha) * fade_power / p.noise;
}

// Largest distance with unit-fade SNR at least gamma0.
inline double max_direct_range(const ChannelParams& p) {
  p.validate();
  return std::pow(p.tx_power * p.c0 / (p.gamma0 * p.noise), 1.0 / p.alpha);
}

namespace detail {

// Kahan-Babuska (Neumaier) compensated accumulator.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline bool nonpositive_integer(double x, long& degree) {
  if (x <= 0.0 && x == std::floor(x) && x > -1e9) {
    degree = static_cast<long>(-x);
    return true;
  }
  return false;
}

// sum_{n=0}^{degree} (a)_n (b)_n / (c)_n z^n / n!, term recurrence.
inline double polynomial_2f1(double a, double b, double c, double z, long degree) {
  CompensatedSum sum;
  double term = 1.0;
  sum.add(term);
  for (long n = 0; n < degree; ++n) {
    const double dn = static_cast<double>(n);
    term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
    sum.add(term);
  }
  return sum.value();
}

}  // namespace detail

// Gauss hypergeometric function 2F1(a, b; c; z).
//
// When a or b is a nonpositive integer the series is a polynomial and all of
// its terms are summed. For 0 < z < 1 the polynomial is evaluated through the
// Pfaff transform 2F1(a,-L;c;z) = (1-z)^L 2F1(c-a,-L;c;z/(z-1)), whose terms
// share one sign when c > a; the untransformed series cancels badly for large
// L. Otherwise the series is summed until |term| < 1e-14 |sum|, which needs |z| < 1.
inline double hyp2f1(double a, double b, double c, double z) {
  if (z == 0.0) return 1.0;

  long deg_a = 0, deg_b = 0;
  const bool term_a = detail::nonpositive_integer(a, deg_a);
  const bool term_b = detail::nonpositive_integer(b, deg_b);
  const bool terminating = term_a || term_b;
  long degree = 0;
  if (terminating) {
    if (term_a && (!term_b || deg_a < deg_b)) {
      std::swap(a, b);
      degree = deg_a;
    } else {
      degree = deg_b;
    }
  }

  long deg_c = 0;
  const bool c_pole = detail::nonpositive_integer(c, deg_c);
  if (c_pole && (!terminating || degree > deg_c)) {
    throw DomainError("hyp2f1: c = " + std::to_string(c) +
                      " is a nonpositive integer and the series does not terminate before (c)_n vanishes");
  }

  if (terminating) {
    if (z > 0.0 && z < 1.0 && !c_pole) {
      const double w = z / (z - 1.0);
      return std::pow(1.0 - z, static_cast<double>(degree)) *
             detail::polynomial_2f1(c - a, b, c, w, degree);
    }
    return detail::polynomial_2f1(a, b, c, z, degree);
  }

  if (!(std::abs(z) < 1.0)) {
    throw DomainError("hyp2f1: series diverges for |z| >= 1 (z = " + std::to_string(z) +
                      ") unless a or b is a nonpositive integer");
  }
  constexpr long kMaxTerms = 10'000'000;
  detail::CompensatedSum sum;
  double term = 1.0;
  sum.add(term);
  for (long n = 0; n < kMaxTerms; ++n) {
    const double dn = static_cast<double>(n);
    term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
    sum.add(term);
    if (std::abs(term) < 1e-14 * std::abs(sum.value())) return sum.value();
  }
  throw DomainError("hyp2f1: series did not converge (z = " + std::to_string(z) + ")");
}

// Probability that a relay at distance r decodes a whole BPSK packet over
// Rayleigh fading.
inline double ct_success_prob(const ChannelParams& p, double r) {
  if (r < 0.0) throw DomainError("ct_success_prob: r must be >= 0");
  const double root = std::sqrt(p.tx_power / (p.tx_power + p.noise * std::pow(r, p.alpha)));
  return std::pow(0.5 + 0.5 * root, p.packet_len);
}

// Argument of the CT hypergeometric term, sigma^2 R^alpha / (4 P).
inline double ct_taylor_argument(const ChannelParams& p, double radius) {
  return p.noise * std::pow(radius, p.alpha) / (4.0 * p.tx_power);
}

// Average CT link gain of a source at the disk center with n_nodes - 1 relays
// uniform in a disk of `radius`. Valid while the Taylor argument stays below 1.
inline double ct_gain_analytic(const ChannelParams& p, long n_nodes, double radius) {
  if (n_nodes < 1) throw DomainError("ct_gain_analytic: need at least one node");
  if (radius < 0.0) throw DomainError("ct_gain_analytic: radius must be >= 0");
  if (n_nodes == 1) return 1.0;
  const double z = ct_taylor_argument(p, radius);
  if (!(z < 1.0)) {
    throw DomainError("ct_gain_analytic: sigma^2 R^alpha / 4P = " + std::to_string(z) +
                      " >= 1, outside the approximation's validity; shrink R");
  }
  const double f = hyp2f1(2.0 / p.alpha, -static_cast<double>(p.packet_len), (p.alpha + 2.0) / p.alpha, z);
  return 1.0 + static_cast<double>(n_nodes - 1) * f;
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Polar position inside a disk; radius drawn with pdf 2r/R^2.
struct PolarPoint {
  double r = 0.0;
  double angle = 0.0;
};

template <class Rng>
PolarPoint sample_uniform_disk(double radius, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  const double v = unit(rng);
  return {radius * std::sqrt(u), 2.0 * std::numbers::pi * v};
}

// Simulated CT gain: node 1 at the center, nodes 2..N uniform in the disk,
// destination at distance A along azimuth 0. Each trial evaluates
// A^alpha sum_k d_k^-alpha P_r(r_k).
inline MonteCarloEstimate ct_gain_montecarlo(const ChannelParams& p, long n_nodes, double radius,
                                             double target_distance, long trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("ct_gain_montecarlo: trials must be >= 1");
  if (n_nodes < 1) throw DomainError("ct_gain_montecarlo: need at least one node");
  if (!(target_distance > radius)) throw DomainError("ct_gain_montecarlo: need A > R");

  std::mt19937_64 rng(seed);
  const double a2 = target_distance * target_distance;
  double mean = 0.0, m2 = 0.0;
  for (long t = 0; t < trials; ++t) {
    double gain = 1.0;
    for (long k = 1; k < n_nodes; ++k) {
      const PolarPoint pt = sample_uniform_disk(radius, rng);
      const double d2 = a2 + pt.r * pt.r - 2.0 * pt.r * target_distance * std::cos(pt.angle);
      gain += std::pow(a2 / d2, 0.5 * p.alpha) * ct_success_prob(p, pt.r);
    }
    const double delta = gain - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (gain - mean);
  }
  MonteCarloEstimate est;
  est.mean = mean;
  if (trials > 1) {
    const double var = m2 / static_cast<double>(trials - 1);
    est.std_error = std::sqrt(var / static_cast<double>(trials));
  }
  return est;
}

// floor(rho pi R^2)
inline long cb_nodes_in_disk(double density, double radius) {
  if (!(density > 0.0) || !(radius > 0.0)) throw DomainError("cb_nodes_in_disk: rho and R must be > 0");
  return static_cast<long>(std::floor(density * std::numbers::pi * radius * radius));
}

// Lower bound on the far-field CB directional gain of N nodes in a disk of radius R.
inline double cb_gain_lower_bound(long n_nodes, double radius, double wavelength) {
  if (n_nodes < 1) throw DomainError("cb_gain_lower_bound: need at least one node");
  if (!(radius > 0.0)) throw DomainError("cb_gain_lower_bound: radius must be > 0");
  const double n = static_cast<double>(n_nodes);
  return n / (1.0 + kBeamformingMu * n * wavelength / radius);
}

// Evenly spaced azimuths covering [-pi, pi).
inline std::vector<double> uniform_phi_grid(std::size_t points = 4096) {
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(points);
  return grid;
}

struct BeamPattern {
  double directivity = 1.0;
  std::vector<double> power;  // P(phi) on the caller's grid
};

// Far-field power pattern of phase-aligned nodes steered at phi = 0.
inline double beam_power(std::span<const PolarPoint> nodes, double wavelength, double phi) {
  const double k = 4.0 * std::numbers::pi * std::sin(0.5 * phi) / wavelength;
  double re = 0.0, im = 0.0;
  for (const PolarPoint& pt : nodes) {
    const double phase = k * pt.r * std::sin(pt.angle - 0.5 * phi);
    re += std::cos(phase);
    im -= std::sin(phase);
  }
  const double n = static_cast<double>(nodes.size());
  return (re * re + im * im) / (n * n);
}

// Directivity P(0) / ((1/2pi) \int P) of a fixed placement; the integral is
// trapezoidal over the sorted periodic grid.
inline BeamPattern beam_pattern(std::span<const PolarPoint> nodes, double wavelength,
                                std::span<const double> phi_grid) {
  if (phi_grid.size() < 16) throw DomainError("beam pattern needs at least 16 grid points");
  if (nodes.empty()) throw DomainError("beam pattern needs at least one node");

  BeamPattern out;
  out.power.resize(phi_grid.size());
  for (std::size_t i = 0; i < phi_grid.size(); ++i) out.power[i] = beam_power(nodes, wavelength, phi_grid[i]);

  std::vector<std::size_t> order(phi_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return phi_grid[x] < phi_grid[y]; });

  detail::CompensatedSum integral;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t a = order[i];
    const std::size_t b = order[(i + 1) % order.size()];
    double width = phi_grid[b] - phi_grid[a];
    if (i + 1 == order.size()) width += 2.0 * std::numbers::pi;
    integral.add(0.5 * width * (out.power[a] + out.power[b]));
  }
  const double mean = integral.value() / (2.0 * std::numbers::pi);
  out.directivity = beam_power(nodes, wavelength, 0.0) / mean;
  return out;
}

// One random CB placement of N nodes uniform in the disk, evaluated on phi_grid.
inline BeamPattern cb_pattern_montecarlo(long n_nodes, double radius, double wavelength,
                                         std::span<const double> phi_grid, std::uint64_t seed) {
  if (n_nodes < 1) throw DomainError("cb_pattern_montecarlo: need at least one node");
  if (!(radius > 0.0)) throw DomainError("cb_pattern_montecarlo: radius must be > 0");
  if (phi_grid.size() < 16) throw DomainError("cb_pattern_montecarlo: grid needs at least 16 points");
  std::mt19937_64 rng(seed);
  std::vector<PolarPoint> nodes(static_cast<std::size_t>(n_nodes));
  for (auto& pt : nodes) pt = sample_uniform_disk(radius, rng);
  return beam_pattern(nodes, wavelength, phi_grid);
}

// Average directivity over `placements` independent placements.
inline MonteCarloEstimate cb_directivity_montecarlo(long n_nodes, double radius, double wavelength,
                                                    long placements, std::uint64_t seed,
                                                    std::size_t grid_points = 4096) {
  if (placements < 1) throw DomainError("cb_directivity_montecarlo: placements must be >= 1");
  const auto grid = uniform_phi_grid(grid_points);
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(placements));
  std::mt19937_64 seeder(seed);
  for (auto& s : seeds) s = seeder();

  double mean = 0.0, m2 = 0.0;
  for (long i = 0; i < placements; ++i) {
    const double d = cb_pattern_montecarlo(n_nodes, radius, wavelength, grid, seeds[static_cast<std::size_t>(i)]).directivity;
    const double delta = d - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (d - mean);
  }
  MonteCarloEstimate est{mean, 0.0};
  if (placements > 1) est.std_error = std::sqrt(m2 / static_cast<double>(placements - 1) / static_cast<double>(placements));
  return est;
}

}  // namespace wsnlife::link
