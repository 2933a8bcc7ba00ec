#include "entangler/duan.hpp"

#include <algorithm>
#include <cmath>

// Standard-form reduction of a two-mode Gaussian state for the EPR-variance
// (inseparability) test. One published version of the transformation rule
// pairs m1 with r1, which contradicts the am/bm definitions it accompanies;
// this file uses the self-consistent pairing (r1 scales the n-mode, r2 the
// m-mode), which reproduces the two-mode squeezed-vacuum closed form
// R = exp(-2r) and zeroes the defining residuals on generic inputs.

namespace entangler {

namespace {

constexpr double kDegenerateTol = 1e-9;

struct RatioSolve {
  double r2 = 1.0;
  double t = 0.0;  // bn/an at the current r1
};

// Eliminate r2 via bn/an = bm/am: with t fixed by r1, r2 solves
// t m r2^2 + (1 - t) r2 - m = 0 (positive root).
RatioSolve solve_r2(double n, double m, double r1) {
  RatioSolve out;
  double an = n * r1 - 1.0;
  double bn = n / r1 - 1.0;
  out.t = bn / an;
  if (out.t < 1e-14) {
    out.r2 = m / (1.0 - out.t);
    return out;
  }
  double b = 1.0 - out.t;
  out.r2 = (-b + std::sqrt(b * b + 4.0 * out.t * m * m)) / (2.0 * out.t * m);
  return out;
}

// Defining equation residual at r1 (with r2 slaved to it):
// sqrt(r1 r2)|c| - |c'|/sqrt(r1 r2) - [sqrt(an am) - sqrt(bn bm)].
double product_residual(double n, double m, double c_abs, double cp_abs,
                        double r1, double r2) {
  double s = std::sqrt(r1 * r2);
  double an = n * r1 - 1.0;
  double bn = n / r1 - 1.0;
  double am = m * r2 - 1.0;
  double bm = m / r2 - 1.0;
  double lhs = s * c_abs - cp_abs / s;
  double rhs = std::sqrt(std::max(an * am, 0.0)) -
               std::sqrt(std::max(bn * bm, 0.0));
  return lhs - rhs;
}

}  // namespace

SubstandardForm duan_substandard(const CovarianceMatrix& V_in) {
  CovarianceMatrix V = rescale(V_in, Normalization::VacuumOne);

  SubstandardForm out;
  double det_a = V.block11().determinant();
  double det_c = V.block22().determinant();
  if (det_a <= 0.0 || det_c <= 0.0) {
    out.status = DuanStatus::DegenerateBlock;
    return out;
  }
  out.n = std::sqrt(det_a);
  out.m = std::sqrt(det_c);

  double det_b = V.block12().determinant();
  double det_v = V.entries().determinant();
  double nm = out.n * out.m;

  // c^2 and c'^2 are the roots of t^2 - s t + det_b^2 = 0 where s follows
  // from expanding (nm - c^2)(nm - c'^2) = det V.
  double s = (nm * nm + det_b * det_b - det_v) / nm;
  double disc = s * s - 4.0 * det_b * det_b;
  if (disc < -1e-10) {
    out.status = DuanStatus::NoRealSolution;
    return out;
  }
  double root = std::sqrt(std::max(disc, 0.0));
  double c_sq = std::max(0.5 * (s + root), 0.0);
  double cp_sq = std::max(0.5 * (s - root), 0.0);

  out.c = std::sqrt(c_sq);
  out.c_prime = std::sqrt(cp_sq);
  if (det_b < 0.0) out.c_prime = -out.c_prime;
  return out;
}

DuanStandardForm duan_standard_form(double n, double m, double c,
                                    double c_prime) {
  DuanStandardForm out;
  double c_abs = std::abs(c);
  double cp_abs = std::abs(c_prime);

  auto apply = [&](double r1, double r2) {
    out.r1 = r1;
    out.r2 = r2;
    out.n1 = n * r1;
    out.n2 = n / r1;
    out.m1 = m * r2;
    out.m2 = m / r2;
    double s = std::sqrt(r1 * r2);
    out.c1 = c * s;
    out.c2 = c_prime / s;
    out.residual_product = product_residual(n, m, c_abs, cp_abs, r1, r2);
    double an = n * r1 - 1.0, bn = n / r1 - 1.0;
    double am = m * r2 - 1.0, bm = m / r2 - 1.0;
    out.residual_ratio =
        (an > 0.0 && am > 0.0) ? bn / an - bm / am : 0.0;
  };

  if (n - 1.0 <= kDegenerateTol || m - 1.0 <= kDegenerateTol) {
    // Pure marginal: an, bn (or am, bm) vanish and the system is 0/0.
    apply(1.0, 1.0);
    out.degenerate = true;
    out.status = DuanStatus::DegenerateState;
    return out;
  }

  if (std::abs(c_abs - cp_abs) <= 1e-12) {
    apply(1.0, 1.0);  // symmetric shortcut: both sides vanish at (1, 1)
    return out;
  }

  // 1-D root finding in r1 on [1, n]; g(1) = |c| - |c'| >= 0 by the
  // substandard-root convention and g flips sign before the bn -> 0 edge.
  auto g = [&](double r1) {
    RatioSolve rs = solve_r2(n, m, r1);
    return product_residual(n, m, c_abs, cp_abs, r1, rs.r2);
  };

  double lo = 1.0 + 1e-13;
  double hi = n * (1.0 - 1e-13);
  double g_lo = g(lo);
  double g_hi = g(hi);
  if (g_lo * g_hi > 0.0) {
    apply(1.0, 1.0);
    out.status = DuanStatus::NoConvergence;
    return out;
  }

  // Safeguarded bisection/secant hybrid.
  double a = lo, b = hi, ga = g_lo, gb = g_hi;
  double r1 = 0.5 * (a + b);
  for (int iter = 0; iter < 200; ++iter) {
    double secant = (std::abs(gb - ga) > 1e-300)
                        ? b - gb * (b - a) / (gb - ga)
                        : 0.5 * (a + b);
    r1 = (secant > a && secant < b) ? secant : 0.5 * (a + b);
    double gr = g(r1);
    if (std::abs(gr) < 1e-13 || b - a < 1e-15 * b) break;
    if (ga * gr <= 0.0) {
      b = r1;
      gb = gr;
    } else {
      a = r1;
      ga = gr;
    }
  }

  RatioSolve rs = solve_r2(n, m, r1);
  apply(r1, rs.r2);
  // The defining equation is a difference of terms of size ~|c1|, so the
  // convergence test must scale with them or large-n states get rejected
  // at machine precision.
  double scale = std::max(1.0, std::abs(out.c1) + std::abs(out.c2));
  if (std::abs(out.residual_product) > 1e-8 * scale ||
      std::abs(out.residual_ratio) > 1e-8)
    out.status = DuanStatus::NoConvergence;
  return out;
}

DuanRResult duan_R(const DuanStandardForm& f) {
  bool n_pure = f.n1 - 1.0 <= kDegenerateTol;
  bool m_pure = f.m1 - 1.0 <= kDegenerateTol;
  if (n_pure && m_pure) {
    // Both marginals pure (vacuum up to local squeezing): a = 1.
    double r = 0.5 * (0.5 * (f.n1 + f.n2) + 0.5 * (f.m1 + f.m2) -
                      std::abs(f.c1) - std::abs(f.c2));
    return {r, DuanStatus::Ok};
  }
  if (n_pure || m_pure) return {0.0, DuanStatus::NotApplicable};

  double a_sq = std::sqrt((f.m1 - 1.0) / (f.n1 - 1.0));
  double denom = a_sq + 1.0 / a_sq;
  double r = (a_sq * 0.5 * (f.n1 + f.n2) + 0.5 * (f.m1 + f.m2) / a_sq -
              std::abs(f.c1) - std::abs(f.c2)) /
             denom;
  return {r, DuanStatus::Ok};
}

DuanReport duan_check(const CovarianceMatrix& V) {
  DuanReport report;
  report.sub = duan_substandard(V);
  if (report.sub.status != DuanStatus::Ok) {
    report.status = DuanStatus::NotApplicable;
    return report;
  }

  report.form = duan_standard_form(report.sub.n, report.sub.m, report.sub.c,
                                   report.sub.c_prime);
  if (report.form.status == DuanStatus::NoConvergence) {
    report.status = DuanStatus::NotApplicable;
    return report;
  }

  DuanRResult r = duan_R(report.form);
  if (r.status != DuanStatus::Ok) {
    report.status = DuanStatus::NotApplicable;
    return report;
  }
  report.R = r.value;

  const auto& f = report.form;
  report.residual_c1 =
      std::abs(f.c1) - std::sqrt(std::max((f.n1 - 1.0) * (f.m1 - 1.0), 0.0));
  report.residual_c2 =
      std::abs(f.c2) - std::sqrt(std::max((f.n2 - 1.0) * (f.m2 - 1.0), 0.0));
  report.entangled = report.R < 1.0 - 1e-9 || report.residual_c1 > 1e-9 ||
                     report.residual_c2 > 1e-9;
  report.status = DuanStatus::Ok;
  return report;
}

}  // namespace entangler
