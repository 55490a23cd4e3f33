#pragma once

// Commands behind the lastexit executable. Each returns the process exit code
// and writes CSV to `out`, diagnostics to `err`.
//
//   0  success
//   2  scenario could not be parsed
//   3  a precondition of a requested operation does not hold
//   4  a Monte Carlo comparison or an identity check failed

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "lastexit/last_exit.hpp"
#include "lastexit/levy_model.hpp"
#include "lastexit/scale_functions.hpp"
#include "lastexit/scenario.hpp"
#include "lastexit/simulate.hpp"

namespace lastexit::cli {

enum ExitCode : int { kOk = 0, kParse = 2, kPrecondition = 3, kValidation = 4 };

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Operation = std::function<double(const LevyModel&, const TransformQuery&)>;

/// Operation name -> evaluation on (model, query). Scale-function rows read
/// q as the index of W^(q) and theta as the exponent; psi reads theta as its argument.
inline const std::map<std::string, Operation>& operations() {
  static const std::map<std::string, Operation> ops{
      {"psi", [](const LevyModel& m, const TransformQuery& a) { validate(m); return psi(m, a.theta); }},
      {"psi_prime", [](const LevyModel& m, const TransformQuery& a) { validate(m); return psi_prime(m, a.theta); }},
      {"phi", [](const LevyModel& m, const TransformQuery& a) { validate(m); return phi(m, a.q); }},
      {"phi_prime", [](const LevyModel& m, const TransformQuery& a) { validate(m); return phi_prime(m, a.q); }},
      {"big_w", [](const LevyModel& m, const TransformQuery& a) { return ScaleEvaluator(m, a.q).w(a.x); }},
      {"big_z", [](const LevyModel& m, const TransformQuery& a) { return ScaleEvaluator(m, a.q).z(a.x); }},
      {"big_z2",
       [](const LevyModel& m, const TransformQuery& a) { return ScaleEvaluator(m, a.q).z(a.x, a.theta); }},
      {"omega_plus_1", [](const LevyModel& m, const TransformQuery& a) { return omega_plus_1(m, a); }},
      {"omega_plus_2", [](const LevyModel& m, const TransformQuery& a) { return omega_plus_2(m, a); }},
      {"omega_minus_1", [](const LevyModel& m, const TransformQuery& a) { return omega_minus_1(m, a); }},
      {"omega_minus_2", [](const LevyModel& m, const TransformQuery& a) { return omega_minus_2(m, a); }},
      {"creeping_transform",
       [](const LevyModel& m, const TransformQuery& a) { return creeping_transform(m, a.p, a.q, a.r, a.x); }},
      {"laplace_T_plus",
       [](const LevyModel& m, const TransformQuery& a) { return laplace_T_plus(m, a.p, a.r, a.x); }},
      {"laplace_T_plus_infinite_horizon",
       [](const LevyModel& m, const TransformQuery& a) { return laplace_T_plus_infinite_horizon(m, a.p, a.x); }},
      {"occupation_transform_negative",
       [](const LevyModel& m, const TransformQuery& a) { return occupation_transform_negative(m, a.q, a.x); }},
      {"joint_T_minus_infinite_horizon",
       [](const LevyModel& m, const TransformQuery& a) {
         return joint_T_minus_infinite_horizon(m, a.p, a.q, a.theta, a.x);
       }},
      {"value_at_last_exit_transform",
       [](const LevyModel& m, const TransformQuery& a) { return value_at_last_exit_transform(m, a.theta, a.x); }},
      {"occupation_transform_positive",
       [](const LevyModel& m, const TransformQuery& a) { return occupation_transform_positive(m, a.q, a.x); }},
      {"last_exit_density_compound_poisson",
       [](const LevyModel& m, const TransformQuery& a) {
         if (m.family != Family::CramerLundberg)
           throw PreconditionError("requires family CramerLundberg");
         return last_exit_density_compound_poisson(m.jump_rate, m.jump_mean_inv, m.drift, a.x);
       }},
  };
  return ops;
}

namespace detail {

inline const char* kHeader = "operation,p,q,r,theta,x,value\n";

struct Row {
  std::string op;
  TransformQuery q;
  double value;
};

inline std::string row_text(const Row& r) {
  return r.op + "," + fmt(r.q.p) + "," + fmt(r.q.q) + "," + fmt(r.q.r) + "," + fmt(r.q.theta) + "," +
         fmt(r.q.x) + "," + fmt(r.value) + "\n";
}

// All rows are computed before anything is written, so a precondition
// failure leaves no partial output.
inline std::vector<Row> evaluate_all(const Scenario& sc, const std::vector<TransformQuery>& queries) {
  std::vector<Row> rows;
  for (const auto& q : queries)
    for (const auto& name : sc.outputs) rows.push_back({name, q, operations().at(name)(sc.model, q)});
  return rows;
}

inline std::vector<TransformQuery> sweep_queries(const Scenario& sc) {
  const SweepSettings& sw = *sc.sweep;
  std::vector<TransformQuery> out;
  const TransformQuery base = sc.queries.empty() ? TransformQuery{} : sc.queries.front();
  for (int i = 0; i < sw.points; ++i) {
    const double v = sw.points == 1 ? sw.start : sw.start + (sw.stop - sw.start) * i / (sw.points - 1);
    TransformQuery q = base;
    if (sw.parameter == "p") q.p = v;
    else if (sw.parameter == "q") q.q = v;
    else if (sw.parameter == "r") q.r = v;
    else if (sw.parameter == "theta") q.theta = v;
    else q.x = v;
    out.push_back(q);
  }
  return out;
}

template <class Body>
int guarded(std::ostream& err, const Body& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kPrecondition;
  } catch (const ModelError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kPrecondition;
  } catch (const DomainError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kPrecondition;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kPrecondition;
  }
}

struct Comparison {
  std::string op;
  TransformQuery q;
  double analytic, estimate, std_error;
  bool has_estimate;
};

/// Monte Carlo estimates for every (query, operation) pair that has a path functional.
inline std::vector<Comparison> run_comparisons(const Scenario& sc, unsigned threads) {
  const MonteCarloSettings& mc = *sc.mc;
  const LevyModel& m = sc.model;
  lastexit::detail::check_paths(mc.n);
  SimOptions opt{mc.step, threads, false};
  std::vector<Comparison> out;
  for (std::size_t qi = 0; qi < sc.queries.size(); ++qi) {
    const TransformQuery& q = sc.queries[qi];
    const std::uint64_t seed = mc.master_seed + 1000003ULL * qi;
    // operations sharing one batch of paths with horizon e_r
    std::vector<std::size_t> finite_idx;
    std::vector<PathValue> finite_fns;
    for (const auto& name : sc.outputs) {
      Comparison c{name, q, operations().at(name)(m, q), 0.0, 0.0, true};
      PathValue fn;
      if (name == "omega_plus_1") fn = functionals::omega_plus_1(q);
      else if (name == "omega_plus_2") fn = functionals::omega_plus_2(q);
      else if (name == "omega_minus_1") fn = functionals::omega_minus_1(q);
      else if (name == "omega_minus_2") fn = functionals::omega_minus_2(q);
      else if (name == "creeping_transform") fn = functionals::creeping(q.p, q.q);
      else if (name == "laplace_T_plus") fn = functionals::discounted_t_plus(q.p);
      if (fn && q.r > 0.0) {
        finite_idx.push_back(out.size());
        finite_fns.push_back(fn);
        out.push_back(c);
        continue;
      }
      Estimate e{};
      if (name == "laplace_T_plus_infinite_horizon") {
        e = estimate_T_plus_infinite(m, q.p, mc.n, seed, q.x, opt);
      } else if (name == "occupation_transform_negative") {
        e = estimate_occupation_negative(m, q.q, mc.n, seed, q.x, opt);
      } else if (name == "occupation_transform_positive") {
        e = estimate_occupation_positive(m, q.q, mc.n, seed, q.x, opt);
      } else if (name == "joint_T_minus_infinite_horizon" || name == "value_at_last_exit_transform" ||
                 (q.r == 0.0 && (name == "omega_minus_1" || name == "creeping_transform"))) {
        TransformQuery tq = q;
        tq.r = 0.0;
        if (name == "value_at_last_exit_transform") tq.p = tq.q = 0.0;
        PathConfig cfg;
        cfg.model = m;
        cfg.x0 = q.x;
        cfg.step = mc.step;
        cfg.seed = seed;
        cfg.stop_below = std::max(stop_level_for(m), -q.x + 1.0);
        const PathValue f = name == "creeping_transform" ? functionals::creeping(q.p, q.q)
                                                          : functionals::omega_minus_1(tq);
        e = run_paths(cfg, mc.n, seed, threads, {f})[0];
      } else {
        c.has_estimate = false;
      }
      c.estimate = e.mean;
      c.std_error = e.std_error;
      out.push_back(c);
    }
    if (!finite_fns.empty()) {
      PathConfig cfg;
      cfg.model = m;
      cfg.x0 = q.x;
      cfg.r = q.r;
      cfg.step = mc.step;
      cfg.seed = seed;
      const auto est = run_paths(cfg, mc.n, seed, threads, finite_fns);
      for (std::size_t k = 0; k < est.size(); ++k) {
        out[finite_idx[k]].estimate = est[k].mean;
        out[finite_idx[k]].std_error = est[k].std_error;
      }
    }
  }
  return out;
}

struct IdentityResult {
  std::string name;
  double error, tolerance;
};

/// Pure identities for the scenario's model.
inline std::vector<IdentityResult> identity_suite(const Scenario& sc) {
  const LevyModel& m = sc.model;
  std::vector<IdentityResult> out;
  double worst = 0.0;
  for (double u = 1e-6; u <= 1e3; u *= 10.0)
    worst = std::max(worst, std::abs(psi(m, phi(m, u)) - u) / std::max(1.0, u));
  out.push_back({"psi_phi_round_trip", worst, 1e-10});
  worst = 0.0;
  for (double q : {0.5, 2.0}) {
    const ScaleEvaluator ev(m, q);
    for (double x : {0.25, 1.0, 2.0})
      worst = std::max(worst, std::abs(ev.z(x, ev.phi()) / std::exp(ev.phi() * x) - 1.0));
  }
  out.push_back({"z_at_phi_is_exponential", worst, 1e-10});
  worst = 0.0;
  for (const auto& q : sc.queries) {
    if (!(q.r > 0.0)) continue;
    const TransformQuery z{0.0, q.q, q.r, 0.0, 0.0};
    const double sum = omega_minus_1(m, z) + omega_minus_2(m, z);
    worst = std::max(worst, std::abs(sum - phi(m, q.r) / phi(m, q.q + q.r)));
  }
  out.push_back({"omega_minus_sum_at_zero", worst, 1e-9});
  return out;
}

}  // namespace detail

/// One CSV row per (query, operation).
inline int cmd_eval(const std::string& path, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const Scenario sc = load_scenario(path);
    const auto rows = detail::evaluate_all(sc, sc.queries);
    out << detail::kHeader;
    for (const auto& r : rows) out << detail::row_text(r);
    return int(kOk);
  });
}

/// Dense grid over the sweep parameter, starting from the first query.
inline int cmd_sweep(const std::string& path, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const Scenario sc = load_scenario(path);
    if (!sc.sweep) throw ParseError("sweep needs a sweep block");
    const auto rows = detail::evaluate_all(sc, detail::sweep_queries(sc));
    out << detail::kHeader;
    for (const auto& r : rows) out << detail::row_text(r);
    return int(kOk);
  });
}

/// Analytic values against Monte Carlo estimates, plus the identity suite.
inline int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err, unsigned threads = 1) {
  return detail::guarded(err, [&] {
    const Scenario sc = load_scenario(path);
    if (!sc.mc) throw ParseError("validate needs an mc block");
    const auto comps = detail::run_comparisons(sc, threads);
    const auto ids = detail::identity_suite(sc);
    bool ok = true;
    out << "operation,p,q,r,theta,x,analytic,estimate,stderr,z,status\n";
    for (const auto& c : comps) {
      out << c.op << "," << fmt(c.q.p) << "," << fmt(c.q.q) << "," << fmt(c.q.r) << "," << fmt(c.q.theta)
          << "," << fmt(c.q.x) << "," << fmt(c.analytic) << ",";
      if (!c.has_estimate) {
        out << ",,,skipped\n";
        continue;
      }
      const double diff = c.estimate - c.analytic;
      const double z = c.std_error > 0.0 ? diff / c.std_error : (diff == 0.0 ? 0.0 : INFINITY);
      const bool pass = std::abs(diff) <= 3.0 * c.std_error + sc.mc->allowance;
      ok = ok && pass;
      out << fmt(c.estimate) << "," << fmt(c.std_error) << "," << fmt(z) << "," << (pass ? "pass" : "FAIL")
          << "\n";
    }
    out << "identity,error,tolerance,status\n";
    for (const auto& id : ids) {
      const bool pass = id.error <= id.tolerance;
      ok = ok && pass;
      out << id.name << "," << fmt(id.error) << "," << fmt(id.tolerance) << "," << (pass ? "pass" : "FAIL")
          << "\n";
    }
    return int(ok ? kOk : kValidation);
  });
}

}  // namespace lastexit::cli
