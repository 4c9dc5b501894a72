#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace nhbell {

struct NelderMeadOptions {
  int max_iters = 2000;
  double f_tol = 1e-9;        // stop when max-min objective spread drops below
  double initial_step = 0.5;  // per-coordinate offset of the start simplex
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0;
  int iterations = 0;
};

// Derivative-free downhill simplex (reflection 1, expansion 2, contraction
// 1/2, shrink 1/2). The objectives here are largest eigenvalues, which are
// only piecewise smooth at level crossings, so a simplex method beats
// gradient-based ones. Fully deterministic given the start point.
template <typename F>
NelderMeadResult nelder_mead_min(F&& f, const Eigen::VectorXd& x0,
                                 const NelderMeadOptions& opt = {}) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  for (int i = 0; i < n; ++i) pts[i + 1](i) += opt.initial_step;
  for (int i = 0; i <= n; ++i) val[i] = f(pts[i]);

  std::vector<int> idx(n + 1);
  NelderMeadResult out;
  for (out.iterations = 0; out.iterations < opt.max_iters; ++out.iterations) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return val[a] < val[b]; });
    const int best = idx[0], worst = idx[n], second = idx[n - 1];
    if (val[worst] - val[best] < opt.f_tol) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= n;

    Eigen::VectorXd refl = centroid + (centroid - pts[worst]);
    double f_refl = f(refl);
    if (f_refl < val[best]) {
      Eigen::VectorXd expand = centroid + 2.0 * (centroid - pts[worst]);
      double f_exp = f(expand);
      if (f_exp < f_refl) {
        pts[worst] = expand;
        val[worst] = f_exp;
      } else {
        pts[worst] = refl;
        val[worst] = f_refl;
      }
    } else if (f_refl < val[second]) {
      pts[worst] = refl;
      val[worst] = f_refl;
    } else {
      Eigen::VectorXd contract =
          centroid + 0.5 * ((f_refl < val[worst] ? refl : pts[worst]) - centroid);
      double f_con = f(contract);
      if (f_con < std::min(f_refl, val[worst])) {
        pts[worst] = contract;
        val[worst] = f_con;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          val[i] = f(pts[i]);
        }
      }
    }
  }

  int best = static_cast<int>(std::min_element(val.begin(), val.end()) -
                              val.begin());
  out.x = pts[best];
  out.f = val[best];
  return out;
}

}  // namespace nhbell
