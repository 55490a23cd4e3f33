#pragma once

// Monte Carlo sampling of last exit functionals.
//
// Cramer-Lundberg paths are simulated exactly (piecewise linear between
// Poisson claim epochs). Families with a Gaussian part use Gaussian
// increments on a grid of the configured step near the barriers and larger
// exact increments where a barrier crossing within the step has probability
// below ~1e-15. Stable paths use Chambers-Mallows-Stuck increments on the
// fixed grid.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "lastexit/errors.hpp"
#include "lastexit/last_exit.hpp"
#include "lastexit/levy_model.hpp"
#include "lastexit/scale_functions.hpp"

namespace lastexit {

struct PathConfig {
  LevyModel model;
  double x0 = 0.0;
  /// Rate of the exponential horizon; 0 means no horizon (a stop level is then required).
  double r = 0.0;
  /// Stop at the first passage above this level (infinite-horizon T+ runs).
  std::optional<double> truncation_level;
  /// Stop at the first passage below -stop_below (T- runs on processes drifting to -inf).
  std::optional<double> stop_below;
  double step = 1e-4;
  std::uint64_t seed = 0;
  /// Sample a Brownian-bridge excursion across 0 inside grid steps whose endpoints share a sign.
  bool bridge_correction = false;
};

enum class StopKind { Horizon, AboveLevel, BelowLevel };

struct PathFunctionals {
  double horizon = 0.0;  ///< e_r, or the stopping time under a stop level
  double t_plus = 0.0;
  double t_minus = 0.0;
  double x_at_t_plus = 0.0;
  double x_at_t_minus = 0.0;
  double occ_neg_before_t_plus = 0.0;
  double occ_pos_before_t_minus = 0.0;
  bool event_plus_is_horizon = false;
  bool event_minus_is_horizon = false;
  bool crept_at_t_minus = false;
  StopKind stop = StopKind::Horizon;
};

/// Online bookkeeping of the last crossings of 0 for a path delivered as
/// linear pieces and downward jumps.
class ExitTracker {
 public:
  /// can_creep: the process has a Gaussian part, so an empty last-exit set
  /// from x0 = 0 leaves X at T- = 0 on the level.
  explicit ExitTracker(double x0, bool can_creep = false) : x0_(x0), x_(x0), can_creep_(can_creep) {}

  double time() const { return t_; }
  double position() const { return x_; }

  /// Linear move from the current point to (t1, x1).
  void segment(double t1, double x1) {
    const double dt = t1 - t_;
    const double a = x_, b = x1;
    if (a > 0.0 && b > 0.0) {
      occ_pos_ += dt;
    } else if (a < 0.0 && b < 0.0) {
      occ_neg_ += dt;
    } else if (a > 0.0) {  // b <= 0
      const double tc = t_ + dt * (a / (a - b));
      occ_pos_ += tc - t_;
      occ_neg_ += t1 - tc;
      down_ = {true, tc, 0.0, true};
    } else if (a < 0.0) {  // b >= 0
      const double tc = t_ + dt * (-a / (b - a));
      occ_neg_ += tc - t_;
      occ_pos_ += t1 - tc;
      up_ = {true, tc};
    } else if (b > 0.0) {
      occ_pos_ += dt;
    } else if (b < 0.0) {
      occ_neg_ += dt;
    }
    t_ = t1;
    x_ = x1;
  }

  /// Jump at the current time to x1 < position().
  void jump(double x1) {
    if (x_ > 0.0 && x1 <= 0.0) down_ = {true, t_, x1, false};
    x_ = x1;
  }

  /// A crossing of 0 and back, invisible at the grid, somewhere at time tm.
  void hidden_excursion(double tm) {
    down_ = {true, tm, 0.0, true};
    up_ = {true, tm};
  }

  PathFunctionals finish(StopKind stop) const {
    PathFunctionals f;
    f.horizon = t_;
    f.stop = stop;
    f.occ_neg_before_t_plus = occ_neg_;
    f.occ_pos_before_t_minus = occ_pos_;
    if (x_ > 0.0) {
      f.t_minus = t_;
      f.x_at_t_minus = x_;
      f.event_minus_is_horizon = true;
    } else if (down_.seen) {
      f.t_minus = down_.t;
      f.x_at_t_minus = down_.x;
      f.crept_at_t_minus = down_.continuous;
    } else {
      f.x_at_t_minus = x0_;
      f.crept_at_t_minus = can_creep_ && x0_ == 0.0;
    }
    if (x_ < 0.0) {
      f.t_plus = t_;
      f.x_at_t_plus = x_;
      f.event_plus_is_horizon = true;
    } else if (up_.seen) {
      f.t_plus = up_.t;
    } else {
      f.x_at_t_plus = x0_;
    }
    return f;
  }

 private:
  struct Down {
    bool seen = false;
    double t = 0.0, x = 0.0;
    bool continuous = false;
  };
  struct Up {
    bool seen = false;
    double t = 0.0;
  };
  double x0_;
  double t_ = 0.0, x_;
  bool can_creep_;
  double occ_pos_ = 0.0, occ_neg_ = 0.0;
  Down down_;
  Up up_;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t path_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Standard spectrally negative stable variable S with E exp(l S) = exp(l^alpha).
template <class Rng>
double stable_negative(Rng& rng, double alpha) {
  const double pi = std::acos(-1.0);
  std::uniform_real_distribution<double> uni(-pi / 2, pi / 2);
  std::exponential_distribution<double> ex(1.0);
  const double v = uni(rng);
  const double w = ex(rng);
  const double t = std::tan(pi * alpha / 2);
  const double b = std::atan(-t) / alpha;  // beta = -1
  const double s = std::pow(1.0 + t * t, 1.0 / (2 * alpha));
  const double z = s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
  return std::pow(-std::cos(pi * alpha / 2), 1.0 / alpha) * z;
}

struct Levels {
  std::optional<double> above, below;
};

inline bool stop_check(const Levels& lv, double x, StopKind& kind) {
  if (lv.above && x >= *lv.above) {
    kind = StopKind::AboveLevel;
    return true;
  }
  if (lv.below && x <= -*lv.below) {
    kind = StopKind::BelowLevel;
    return true;
  }
  return false;
}

inline PathFunctionals sample_cramer_lundberg(const PathConfig& c, std::mt19937_64& rng) {
  const LevyModel& m = c.model;
  const double mu = m.drift;
  std::exponential_distribution<double> claim_gap(m.jump_rate), claim(m.jump_mean_inv);
  const double horizon = c.r > 0.0 ? std::exponential_distribution<double>(c.r)(rng)
                                   : std::numeric_limits<double>::infinity();
  const Levels lv{c.truncation_level, c.stop_below};
  ExitTracker tr(c.x0);
  StopKind kind = StopKind::Horizon;
  if (stop_check(lv, c.x0, kind)) return tr.finish(kind);
  for (;;) {
    const double t_jump = tr.time() + claim_gap(rng);
    double t_end = std::min(t_jump, horizon);
    double x_end = tr.position() + mu * (t_end - tr.time());
    if (lv.above && x_end >= *lv.above) {
      t_end = tr.time() + (*lv.above - tr.position()) / mu;
      tr.segment(t_end, *lv.above);
      return tr.finish(StopKind::AboveLevel);
    }
    tr.segment(t_end, x_end);
    if (t_end >= horizon) return tr.finish(StopKind::Horizon);
    tr.jump(tr.position() - claim(rng));
    if (stop_check(lv, tr.position(), kind)) return tr.finish(kind);
  }
}

inline PathFunctionals sample_gaussian(const PathConfig& c, std::mt19937_64& rng) {
  const LevyModel& m = c.model;
  const double drift = m.linear_coefficient();
  const double sigma = m.sigma;
  const bool jumps = m.has_jumps();
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  const double horizon = c.r > 0.0 ? std::exponential_distribution<double>(c.r)(rng)
                                   : std::numeric_limits<double>::infinity();
  std::exponential_distribution<double> claim_gap(jumps ? m.jump_rate : 1.0);
  std::exponential_distribution<double> claim(jumps ? m.jump_mean_inv : 1.0);
  double next_jump = jumps ? claim_gap(rng) : std::numeric_limits<double>::infinity();
  const Levels lv{c.truncation_level, c.stop_below};
  ExitTracker tr(c.x0, sigma > 0.0);
  StopKind kind = StopKind::Horizon;
  if (stop_check(lv, c.x0, kind)) return tr.finish(kind);
  constexpr double kSafety = 8.0;  // standard deviations of clearance for a long step
  constexpr double kMaxStep = 1.0;
  for (;;) {
    const double x = tr.position();
    double dist = std::abs(x);
    if (lv.above) dist = std::min(dist, *lv.above - x);
    if (lv.below) dist = std::min(dist, x + *lv.below);
    double dt = c.step;
    if (dist > kSafety * sigma * std::sqrt(c.step) + std::abs(drift) * c.step) {
      // largest dt with kSafety * sigma * sqrt(dt) + |drift| dt <= dist
      const double a = std::abs(drift), b = kSafety * sigma;
      const double sq = a > 0.0 ? (-b + std::sqrt(b * b + 4 * a * dist)) / (2 * a) : dist / b;
      dt = std::clamp(sq * sq, c.step, kMaxStep);
    }
    const double t0 = tr.time();
    bool at_jump = false, at_horizon = false;
    if (t0 + dt >= next_jump) {
      dt = next_jump - t0;
      at_jump = true;
    }
    if (t0 + dt >= horizon) {
      dt = horizon - t0;
      at_horizon = true;
      at_jump = false;
    }
    const double x1 = x + drift * dt + sigma * std::sqrt(dt) * gauss(rng);
    if (c.bridge_correction && dt <= c.step * 1.000001 && x * x1 > 0.0) {
      const double expo = 2.0 * x * x1 / (sigma * sigma * dt);
      if (expo < 40.0 && unif(rng) < std::exp(-expo)) tr.hidden_excursion(t0 + 0.5 * dt);
    }
    tr.segment(t0 + dt, x1);
    if (stop_check(lv, x1, kind)) return tr.finish(kind);
    if (at_horizon) return tr.finish(StopKind::Horizon);
    if (at_jump) {
      tr.jump(x1 - claim(rng));
      next_jump = tr.time() + claim_gap(rng);
      if (stop_check(lv, tr.position(), kind)) return tr.finish(kind);
    }
  }
}

inline PathFunctionals sample_stable(const PathConfig& c, std::mt19937_64& rng) {
  const LevyModel& m = c.model;
  const double drift = m.linear_coefficient();
  const double horizon = c.r > 0.0 ? std::exponential_distribution<double>(c.r)(rng)
                                   : std::numeric_limits<double>::infinity();
  const double scale = std::pow(c.step, 1.0 / m.alpha);
  const Levels lv{c.truncation_level, c.stop_below};
  ExitTracker tr(c.x0);
  StopKind kind = StopKind::Horizon;
  if (stop_check(lv, c.x0, kind)) return tr.finish(kind);
  for (;;) {
    const double t0 = tr.time();
    const bool last = t0 + c.step >= horizon;
    const double dt = last ? horizon - t0 : c.step;
    const double inc_scale = last ? std::pow(dt, 1.0 / m.alpha) : scale;
    const double x = tr.position();
    const double x1 = x + drift * dt + inc_scale * stable_negative(rng, m.alpha);
    if (x > 0.0 && x1 <= 0.0) {
      // downward passage of a process without Gaussian part: by a jump
      tr.segment(t0 + dt, x);
      tr.jump(x1);
    } else {
      tr.segment(t0 + dt, x1);
    }
    if (stop_check(lv, x1, kind)) return tr.finish(kind);
    if (last) return tr.finish(StopKind::Horizon);
  }
}

inline void validate_config(const PathConfig& c) {
  validate(c.model);
  if (!(c.r >= 0.0) || !std::isfinite(c.r)) throw PreconditionError("requires r>=0");
  if (c.r == 0.0 && !c.truncation_level && !c.stop_below)
    throw PreconditionError("requires r>0 or a stop level");
  if (c.truncation_level && !(*c.truncation_level > 0.0))
    throw PreconditionError("requires truncation_level>0");
  if (c.stop_below && !(*c.stop_below > 0.0)) throw PreconditionError("requires stop_below>0");
  if (!c.model.bounded_variation() && !(c.step > 0.0 && std::isfinite(c.step)))
    throw PreconditionError("requires step>0");
  if (!std::isfinite(c.x0)) throw PreconditionError("requires finite x");
}

}  // namespace detail

/// One path with the stream determined by config.seed.
inline PathFunctionals sample_path(const PathConfig& config) {
  detail::validate_config(config);
  std::mt19937_64 rng(config.seed);
  switch (config.model.family) {
    case Family::CramerLundberg: return detail::sample_cramer_lundberg(config, rng);
    case Family::StableDrift: return detail::sample_stable(config, rng);
    default: return detail::sample_gaussian(config, rng);
  }
}

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  ///< sample standard deviation / sqrt(n)
  std::size_t n = 0;
  std::uint64_t master_seed = 0;
};

using PathValue = std::function<double(const PathFunctionals&)>;

namespace detail {

struct Moments {
  double n = 0.0, mean = 0.0, m2 = 0.0;
  void add(double v) {
    n += 1.0;
    const double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    const double tot = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / tot;
    m2 += o.m2 + d * d * n * o.n / tot;
    n = tot;
  }
};

inline constexpr std::size_t kChunk = 4096;

template <class Body>
void for_each_chunk(std::size_t chunks, unsigned threads, const Body& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || chunks <= 1) {
    for (std::size_t k = 0; k < chunks; ++k) body(k);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex guard;
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t k = next++; k < chunks; k = next++) body(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Simulates n paths and averages each functional over the same paths.
/// Path i uses a seed derived from (master_seed, i); chunk results are
/// combined in chunk order, so the output does not depend on `threads`.
inline std::vector<Estimate> run_paths(const PathConfig& base, std::size_t n, std::uint64_t master_seed,
                                       unsigned threads, const std::vector<PathValue>& functionals) {
  detail::validate_config(base);
  const std::size_t chunks = (n + detail::kChunk - 1) / detail::kChunk;
  std::vector<std::vector<detail::Moments>> acc(chunks, std::vector<detail::Moments>(functionals.size()));
  detail::for_each_chunk(chunks, threads, [&](std::size_t k) {
    PathConfig cfg = base;
    const std::size_t end = std::min(n, (k + 1) * detail::kChunk);
    for (std::size_t i = k * detail::kChunk; i < end; ++i) {
      cfg.seed = detail::path_seed(master_seed, i);
      const PathFunctionals f = sample_path(cfg);
      for (std::size_t j = 0; j < functionals.size(); ++j) acc[k][j].add(functionals[j](f));
    }
  });
  std::vector<Estimate> out(functionals.size());
  for (std::size_t j = 0; j < functionals.size(); ++j) {
    detail::Moments tot;
    for (std::size_t k = 0; k < chunks; ++k) tot.merge(acc[k][j]);
    out[j].mean = tot.mean;
    out[j].n = n;
    out[j].master_seed = master_seed;
    out[j].std_error = n > 1 ? std::sqrt(tot.m2 / (tot.n - 1.0) / tot.n) : 0.0;
  }
  return out;
}

/// Per-path values of one functional, in path order.
inline std::vector<double> collect_paths(const PathConfig& base, std::size_t n, std::uint64_t master_seed,
                                         unsigned threads, const PathValue& value) {
  detail::validate_config(base);
  std::vector<double> out(n);
  const std::size_t chunks = (n + detail::kChunk - 1) / detail::kChunk;
  detail::for_each_chunk(chunks, threads, [&](std::size_t k) {
    PathConfig cfg = base;
    const std::size_t end = std::min(n, (k + 1) * detail::kChunk);
    for (std::size_t i = k * detail::kChunk; i < end; ++i) {
      cfg.seed = detail::path_seed(master_seed, i);
      out[i] = value(sample_path(cfg));
    }
  });
  return out;
}

// Path functionals whose expectations are the transforms in last_exit.hpp.
namespace functionals {

inline PathValue omega_plus_1(const TransformQuery& q) {
  return [q](const PathFunctionals& f) {
    return f.event_plus_is_horizon ? 0.0 : std::exp(-q.p * f.t_plus - q.q * f.occ_neg_before_t_plus);
  };
}
inline PathValue omega_plus_2(const TransformQuery& q) {
  return [q](const PathFunctionals& f) {
    return f.event_plus_is_horizon
               ? std::exp(-q.p * f.t_plus - q.q * f.occ_neg_before_t_plus + q.theta * f.x_at_t_plus)
               : 0.0;
  };
}
inline PathValue omega_minus_1(const TransformQuery& q) {
  return [q](const PathFunctionals& f) {
    return f.event_minus_is_horizon
               ? 0.0
               : std::exp(-q.p * f.t_minus - q.q * f.occ_pos_before_t_minus + q.theta * f.x_at_t_minus);
  };
}
inline PathValue omega_minus_2(const TransformQuery& q) {
  return [q](const PathFunctionals& f) {
    return f.event_minus_is_horizon
               ? std::exp(-q.p * f.t_minus - q.q * f.occ_pos_before_t_minus - q.theta * f.x_at_t_minus)
               : 0.0;
  };
}
inline PathValue creeping(double p, double q) {
  return [p, q](const PathFunctionals& f) {
    return (!f.event_minus_is_horizon && f.crept_at_t_minus)
               ? std::exp(-p * f.t_minus - q * f.occ_pos_before_t_minus)
               : 0.0;
  };
}
/// Same discounting as creeping() but over every last exit, continuous or by a jump.
inline PathValue last_exit_below(double p, double q) {
  return [p, q](const PathFunctionals& f) {
    return f.event_minus_is_horizon ? 0.0 : std::exp(-p * f.t_minus - q * f.occ_pos_before_t_minus);
  };
}
inline PathValue discounted_t_plus(double p) {
  return [p](const PathFunctionals& f) { return std::exp(-p * f.t_plus); };
}
inline PathValue discounted_occ_neg(double q) {
  return [q](const PathFunctionals& f) { return std::exp(-q * f.occ_neg_before_t_plus); };
}
inline PathValue discounted_occ_pos(double q) {
  return [q](const PathFunctionals& f) { return std::exp(-q * f.occ_pos_before_t_minus); };
}

}  // namespace functionals

struct SimOptions {
  double step = 1e-4;
  unsigned threads = 1;
  bool bridge_correction = false;
};

inline constexpr std::size_t kMinPaths = 10000;

namespace detail {

inline void check_paths(std::size_t n) {
  if (n < kMinPaths) throw PreconditionError("requires n>=10000");
}

inline PathConfig horizon_config(const LevyModel& m, double r, double x, const SimOptions& o) {
  PathConfig c;
  c.model = m;
  c.r = r;
  c.x0 = x;
  c.step = o.step;
  c.bridge_correction = o.bridge_correction;
  return c;
}

}  // namespace detail

/// Estimates of (omega_plus_1, omega_plus_2).
inline std::pair<Estimate, Estimate> estimate_omega_plus(const LevyModel& m, const TransformQuery& q,
                                                         std::size_t n, std::uint64_t master_seed,
                                                         const SimOptions& o = {}) {
  detail::check_paths(n);
  detail::check_query(q, false);
  auto e = run_paths(detail::horizon_config(m, q.r, q.x, o), n, master_seed, o.threads,
                     {functionals::omega_plus_1(q), functionals::omega_plus_2(q)});
  return {e[0], e[1]};
}

/// Estimates of (omega_minus_1, omega_minus_2).
inline std::pair<Estimate, Estimate> estimate_omega_minus(const LevyModel& m, const TransformQuery& q,
                                                          std::size_t n, std::uint64_t master_seed,
                                                          const SimOptions& o = {}) {
  detail::check_paths(n);
  detail::check_query(q, false);
  auto e = run_paths(detail::horizon_config(m, q.r, q.x, o), n, master_seed, o.threads,
                     {functionals::omega_minus_1(q), functionals::omega_minus_2(q)});
  return {e[0], e[1]};
}

inline Estimate estimate_creeping(const LevyModel& m, double p, double q, double r, std::size_t n,
                                  std::uint64_t master_seed, double x, const SimOptions& o = {}) {
  detail::check_paths(n);
  detail::check_query({p, q, r, 0.0, x}, false);
  if (m.sigma == 0.0) {
    validate(m);
    return {0.0, 0.0, n, master_seed};
  }
  return run_paths(detail::horizon_config(m, r, x, o), n, master_seed, o.threads,
                   {functionals::creeping(p, q)})[0];
}

/// Level B with 1 - psi'(0+) W(B) below `bias`: from B the process returns below 0
/// with at most that probability.
inline double truncation_level_for(const LevyModel& m, double bias = 1e-4) {
  detail::require_positive_mean(m);
  const ScaleEvaluator ev(m, 0.0);
  const double mean = psi_prime_at_zero(m);
  auto ruin = [&](double b) { return 1.0 - mean * ev.w(b); };
  double hi = 1.0;
  while (ruin(hi) >= bias) {
    hi *= 2.0;
    if (hi > 1e6) throw ConvergenceError("truncation level search did not terminate");
  }
  double lo = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ruin(mid) >= bias ? lo : hi) = mid;
  }
  return hi;
}

/// Level L below 0 after which a process with psi'(0+) < 0 returns above 0
/// with probability exp(-Phi(0) L) <= bias.
inline double stop_level_for(const LevyModel& m, double bias = 1e-10) {
  detail::require_negative_mean(m);
  return -std::log(bias) / phi(m, 0.0);
}

/// Estimate of E_x exp(-p T+) with the path stopped at the truncation level.
inline Estimate estimate_T_plus_infinite(const LevyModel& m, double p, std::size_t n,
                                         std::uint64_t master_seed, double x, const SimOptions& o = {}) {
  detail::check_paths(n);
  validate(m);
  detail::require_positive_mean(m);
  PathConfig c = detail::horizon_config(m, 0.0, x, o);
  c.truncation_level = std::max(truncation_level_for(m), x + 1.0);
  return run_paths(c, n, master_seed, o.threads, {functionals::discounted_t_plus(p)})[0];
}

/// Estimate of E_x exp(-q int_0^inf 1{X_s < 0} ds), psi'(0+) > 0.
inline Estimate estimate_occupation_negative(const LevyModel& m, double q, std::size_t n,
                                             std::uint64_t master_seed, double x,
                                             const SimOptions& o = {}) {
  detail::check_paths(n);
  validate(m);
  detail::require_positive_mean(m);
  PathConfig c = detail::horizon_config(m, 0.0, x, o);
  c.truncation_level = std::max(truncation_level_for(m), x + 1.0);
  return run_paths(c, n, master_seed, o.threads, {functionals::discounted_occ_neg(q)})[0];
}

/// Estimate of E_x exp(-q int_0^inf 1{X_s > 0} ds), psi'(0+) < 0.
inline Estimate estimate_occupation_positive(const LevyModel& m, double q, std::size_t n,
                                             std::uint64_t master_seed, double x,
                                             const SimOptions& o = {}) {
  detail::check_paths(n);
  validate(m);
  detail::require_negative_mean(m);
  PathConfig c = detail::horizon_config(m, 0.0, x, o);
  c.stop_below = std::max(stop_level_for(m), -x + 1.0);
  return run_paths(c, n, master_seed, o.threads, {functionals::discounted_occ_pos(q)})[0];
}

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw PreconditionError("requires a non-empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = double(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - double(i) / n, double(i + 1) / n - f});
  }
  return d;
}

}  // namespace lastexit
