#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nhbell/nelder_mead.hpp"
#include "nhbell/optimize.hpp"
#include "nhbell/probability.hpp"
#include "nhbell/quantum.hpp"
#include "nhbell/rng.hpp"

namespace nhbell {

// Detector efficiencies per site. The detection model is multiplicative:
// every probability term is scaled by the product of the efficiencies of its
// participating sites; no-detection events are discarded, and the constant K
// is not a detection event so it is never scaled.
struct EfficiencyVector {
  std::array<double, 3> eta{1, 1, 1};

  EfficiencyVector() = default;
  EfficiencyVector(double e1, double e2, double e3) : eta{e1, e2, e3} {
    for (double e : eta)
      if (e < 0 || e > 1)
        throw std::invalid_argument("efficiencies must lie in [0,1]");
  }
};

enum class Scenario { Symmetric, OnePerfect, TwoPerfect, Frontier };

inline const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Symmetric: return "symmetric";
    case Scenario::OnePerfect: return "one-perfect";
    case Scenario::TwoPerfect: return "two-perfect";
    case Scenario::Frontier: return "frontier";
  }
  return "?";
}

struct NoViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Efficiency-modified operator
//   J = sum_S c_S (prod_{i in S} eta_i) (x)_i (i in S ? (I+O_i)/2 : I) - K I.
// A positive largest eigenvalue certifies a violation that survives the
// detector losses.
inline HermitianOperator efficiency_operator(const ProbabilityForm& q,
                                             const EfficiencyVector& eta,
                                             const MeasurementSettings& m) {
  if (q.arity() != 3)
    throw std::invalid_argument("efficiency analysis expects a 3-site form");
  const Eigen::Index dim = 8;
  MatrixXc total = -to_double(q.bound()) * MatrixXc::Identity(dim, dim);
  for (const auto& [key, coeff] : q.terms()) {
    double weight = to_double(coeff);
    std::array<MatrixXc, 3> factor;
    for (Site s : kSites) {
      int i = static_cast<int>(s);
      if (key.at(s)) {
        weight *= eta.eta[i];
        factor[i] = 0.5 * (detail::identity2() +
                           bloch_observable(m.at(s, key.at(s))).mat());
      } else {
        factor[i] = detail::identity2();
      }
    }
    total += weight * detail::kron_all(factor, 3);
  }
  return HermitianOperator(std::move(total));
}

struct AngleMax {
  double lambda = 0;
  std::array<double, 3> theta{};  // azimuths of the second observables
};

// Genuinely zero maxima occur whenever some setting choice annihilates every
// detection term (e.g. all observables equal with the state in the dark
// eigenspace), so lambda_max floats at 0 up to roundoff. Any real violation
// near a threshold clears 1e-8 by orders of magnitude, while the bias this
// margin adds to a bisected threshold is far below the tolerances used.
inline constexpr double kPositivityMargin = 1e-8;

// Maximizes lambda_max(J) over the measurement angles. Default search: first
// observables pinned to sigma_x, second observables in the xy-plane, one
// azimuth per site (rotations about z make this pinning lossless within the
// plane). AngleSpace::FullSphere instead frees all six observables (12
// parameters) to test the in-plane restriction itself.
inline OptimizerConfig detection_defaults() {
  OptimizerConfig cfg;
  cfg.space = AngleSpace::XYPlane;
  return cfg;
}

inline AngleMax max_eigen_over_angles(const ProbabilityForm& q,
                                      const EfficiencyVector& eta,
                                      const OptimizerConfig& cfg =
                                          detection_defaults()) {
  cfg.validate();
  const bool full = cfg.space == AngleSpace::FullSphere;

  auto settings_from = [&](const Eigen::VectorXd& x) {
    MeasurementSettings m;
    m.arity = 3;
    for (int s = 0; s < 3; ++s) {
      if (full) {
        m.set(static_cast<Site>(s), 1, BlochVector::sphere(x(4 * s), x(4 * s + 1)));
        m.set(static_cast<Site>(s), 2,
              BlochVector::sphere(x(4 * s + 2), x(4 * s + 3)));
      } else {
        m.set(static_cast<Site>(s), 1, BlochVector::x());
        m.set(static_cast<Site>(s), 2, BlochVector::xy(x(s)));
      }
    }
    return m;
  };
  const int dim = full ? 12 : 3;

  auto objective = [&](const Eigen::VectorXd& x) {
    return -eigen_max(efficiency_operator(q, eta, settings_from(x))).value;
  };

  NelderMeadOptions nm;
  nm.max_iters = cfg.max_iters;
  nm.f_tol = cfg.tol;

  AngleMax best;
  best.lambda = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg.restarts; ++k) {
    Eigen::VectorXd x0(dim);
    if (k == 0) {
      // sigma_x / sigma_y everywhere.
      if (full) {
        for (int s = 0; s < 3; ++s) {
          x0(4 * s) = std::numbers::pi / 2;
          x0(4 * s + 1) = 0;
          x0(4 * s + 2) = std::numbers::pi / 2;
          x0(4 * s + 3) = std::numbers::pi / 2;
        }
      } else {
        x0.setConstant(std::numbers::pi / 2);
      }
    } else {
      SplitMix64 rng = SplitMix64::split(cfg.seed, static_cast<std::uint64_t>(k));
      for (int i = 0; i < dim; ++i) x0(i) = rng.next_in(0.0, 2 * std::numbers::pi);
    }
    auto res = nelder_mead_min(objective, x0, nm);
    if (-res.f > best.lambda) {
      best.lambda = -res.f;
      if (full) {
        for (int s = 0; s < 3; ++s) best.theta[s] = res.x(4 * s + 3);
      } else {
        for (int s = 0; s < 3; ++s) best.theta[s] = res.x(s);
      }
    }
  }
  return best;
}

struct FrontierPoint {
  double eta2 = 0;
  // Smallest eta3 with a surviving violation at (1, eta2, eta3); unset when
  // even eta3 = 1 shows none.
  std::optional<double> eta3_min;
};

struct ThresholdReport {
  Scenario scenario = Scenario::Symmetric;
  double threshold = 0;
  AngleMax at_threshold;      // best angles/margin just above the threshold
  int bisection_iterations = 0;
  double tol = 0;
  bool predicate_above = false;  // re-checked at threshold + tol, fresh seed
  bool predicate_below = false;  // re-checked at threshold - tol, fresh seed
  std::vector<FrontierPoint> frontier;          // Frontier scenario only
  std::optional<double> frontier_eta2_at_zero;  // eta2 threshold when eta3 = 0
};

namespace detail {

struct BisectOutcome {
  double threshold = 0;
  int iterations = 0;
  AngleMax above;
};

// Bisection of the positivity predicate over one free efficiency. Assumes the
// predicate is monotone in eta; the final bracket re-checks in threshold()
// surface a violation of that assumption instead of a bogus threshold.
template <typename MakeEta>
BisectOutcome bisect_threshold(const ProbabilityForm& q, MakeEta&& make_eta,
                               double tol, const OptimizerConfig& cfg) {
  BisectOutcome out;
  AngleMax at_one = max_eigen_over_angles(q, make_eta(1.0), cfg);
  if (at_one.lambda <= kPositivityMargin)
    throw NoViolationError(
        "no violation at unit efficiency; nothing to threshold");
  AngleMax at_zero = max_eigen_over_angles(q, make_eta(0.0), cfg);
  if (at_zero.lambda > kPositivityMargin) {
    out.threshold = 0.0;
    out.above = at_zero;
    return out;
  }
  double lo = 0.0, hi = 1.0;
  AngleMax hi_result = at_one;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    AngleMax m = max_eigen_over_angles(q, make_eta(mid), cfg);
    ++out.iterations;
    if (m.lambda > kPositivityMargin) {
      hi = mid;
      hi_result = m;
    } else {
      lo = mid;
    }
  }
  out.threshold = 0.5 * (lo + hi);
  out.above = hi_result;
  return out;
}

}  // namespace detail

// Locates the detection-efficiency threshold for the given scenario. The free
// efficiency is bisected on [0,1] against positivity of the angle-maximized
// largest eigenvalue; near the threshold the objective is nearly flat, so the
// final bracket checks run with doubled restarts and a fresh seed.
inline ThresholdReport threshold(const ProbabilityForm& q, Scenario scenario,
                                 double tol,
                                 const OptimizerConfig& cfg =
                                     detection_defaults()) {
  if (!(tol > 0 && tol <= 0.01))
    throw std::invalid_argument("threshold tolerance must be in (0, 0.01]");
  ThresholdReport report;
  report.scenario = scenario;
  report.tol = tol;

  auto make_eta = [&](double x) {
    switch (scenario) {
      case Scenario::Symmetric: return EfficiencyVector(x, x, x);
      case Scenario::OnePerfect: return EfficiencyVector(1, x, x);
      case Scenario::TwoPerfect: return EfficiencyVector(1, 1, x);
      default: throw std::logic_error("frontier handled separately");
    }
  };

  OptimizerConfig bracket_cfg = cfg;
  bracket_cfg.restarts = std::max(cfg.restarts * 2, 128);
  bracket_cfg.seed = SplitMix64::split(cfg.seed, 0xb15ec7).next();

  if (scenario == Scenario::Frontier) {
    // Outer scan of eta2 with eta1 = 1, inner bisection on eta3; the terminal
    // point bisects eta2 directly at eta3 = 0.
    for (int i = 0; i <= 5; ++i) {
      double eta2 = 1.0 - 0.1 * i;
      FrontierPoint pt;
      pt.eta2 = eta2;
      try {
        auto res = detail::bisect_threshold(
            q, [&](double x) { return EfficiencyVector(1, eta2, x); }, tol, cfg);
        pt.eta3_min = res.threshold;
        report.bisection_iterations += res.iterations;
      } catch (const NoViolationError&) {
        // leave eta3_min unset
      }
      report.frontier.push_back(pt);
    }
    auto res = detail::bisect_threshold(
        q, [&](double x) { return EfficiencyVector(1, x, 0.0); }, tol, cfg);
    report.frontier_eta2_at_zero = res.threshold;
    report.threshold = res.threshold;
    report.at_threshold = res.above;
    report.bisection_iterations += res.iterations;
    double up = std::min(1.0, res.threshold + tol);
    double dn = std::max(0.0, res.threshold - tol);
    report.predicate_above =
        max_eigen_over_angles(q, EfficiencyVector(1, up, 0.0), bracket_cfg)
            .lambda > kPositivityMargin;
    report.predicate_below =
        max_eigen_over_angles(q, EfficiencyVector(1, dn, 0.0), bracket_cfg)
            .lambda > kPositivityMargin;
    return report;
  }

  auto res = detail::bisect_threshold(q, make_eta, tol, cfg);
  report.threshold = res.threshold;
  report.at_threshold = res.above;
  report.bisection_iterations = res.iterations;

  double up = std::min(1.0, report.threshold + tol);
  double dn = std::max(0.0, report.threshold - tol);
  report.predicate_above =
      max_eigen_over_angles(q, make_eta(up), bracket_cfg).lambda >
      kPositivityMargin;
  report.predicate_below =
      max_eigen_over_angles(q, make_eta(dn), bracket_cfg).lambda >
      kPositivityMargin;
  if (report.threshold > 0 && (!report.predicate_above || report.predicate_below))
    throw std::runtime_error(
        "threshold bracket re-check failed: predicate is not monotone here "
        "(or the angle search is too shallow); not reporting a threshold");
  return report;
}

}  // namespace nhbell
