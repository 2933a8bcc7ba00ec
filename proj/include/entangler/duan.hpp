#pragma once

#include "entangler/covariance.hpp"

namespace entangler {

enum class DuanStatus {
  Ok,
  NoRealSolution,   // c/c' quadratic has no real root
  DegenerateBlock,  // det A or det C <= 0
  NoConvergence,    // root finder residual above 1e-8
  DegenerateState,  // pure marginal (n or m at 1): scaling system indeterminate
  NotApplicable,
};

// Substandard form of a two-mode covariance matrix in VacuumOne units:
// n = sqrt(det A), m = sqrt(det C), and (c, c') solving
// c c' = det B, (nm - c^2)(nm - c'^2) = det V, with |c| >= |c'| and
// sign(c c') = sign(det B).
struct SubstandardForm {
  double n = 1.0, m = 1.0, c = 0.0, c_prime = 0.0;
  DuanStatus status = DuanStatus::Ok;
};

// Standard form: local squeezing parameters (r1, r2) chosen so that
//   sqrt(r1 r2)|c| - |c'|/sqrt(r1 r2) = sqrt(an am) - sqrt(bn bm)
//   bn/an = bm/am
// with an = n r1 - 1, bn = n/r1 - 1, am = m r2 - 1, bm = m/r2 - 1.
// The transformed invariants are n1 = n r1, n2 = n/r1, m1 = m r2, m2 = m/r2,
// c1 = c sqrt(r1 r2), c2 = c'/sqrt(r1 r2). The index pairing of m with r2 is
// the self-consistent reading of the am/bm definitions; see the module notes
// in duan.cpp.
struct DuanStandardForm {
  double n1 = 1.0, n2 = 1.0, m1 = 1.0, m2 = 1.0;
  double c1 = 0.0, c2 = 0.0;
  double r1 = 1.0, r2 = 1.0;
  double residual_product = 0.0;  // defining equation for (r1, r2)
  double residual_ratio = 0.0;    // bn/an - bm/am
  bool degenerate = false;
  DuanStatus status = DuanStatus::Ok;
};

struct DuanRResult {
  double value = 0.0;
  DuanStatus status = DuanStatus::Ok;
};

struct DuanReport {
  SubstandardForm sub;
  DuanStandardForm form;
  double R = 0.0;
  // Margins of the two EPR-variance inequalities: positive means violated.
  double residual_c1 = 0.0;  // |c1| - sqrt((n1-1)(m1-1))
  double residual_c2 = 0.0;  // |c2| - sqrt((n2-1)(m2-1))
  bool entangled = false;
  DuanStatus status = DuanStatus::Ok;
};

// Auto-rescales VacuumHalf input.
SubstandardForm duan_substandard(const CovarianceMatrix& V);

DuanStandardForm duan_standard_form(double n, double m, double c, double c_prime);

// R = [a^2 (n1+n2)/2 + (m1+m2)/(2 a^2) - |c1| - |c2|] / (a^2 + a^-2),
// a^2 = sqrt((m1-1)/(n1-1)). Separable iff R >= 1.
DuanRResult duan_R(const DuanStandardForm& f);

// Full pipeline; sub-operation failures surface as a NotApplicable verdict,
// never an exception.
DuanReport duan_check(const CovarianceMatrix& V);

}  // namespace entangler
