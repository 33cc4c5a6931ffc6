#pragma once

// Admissible (alpha, beta, gamma) regions for global existence, and the
// coefficient polynomials whose signs carve those regions out.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsk::regime {

enum class Theorem { T1_1, T1_2 };

inline const char* to_string(Theorem t) { return t == Theorem::T1_1 ? "T1.1" : "T1.2"; }

// Coefficient of r^{2m} v_x^4 / v^{alpha+beta+8} in the v_x / v^{alpha+1} estimate.
inline double f1(double alpha, double beta) {
  return (beta + 5.0) * (alpha + beta + 7.0) / 6.0 + (alpha + 1.0) * (beta + 5.0) / 2.0 -
         (alpha + beta + 6.0) * (alpha + beta + 7.0) / 3.0;
}

// Coefficient of r^{m-1} v_x^3 / v^{alpha+beta+6}.
inline double f2(int m, double alpha, double beta) {
  return -m * (2.0 * alpha + 3.0) + 2.0 * m * (alpha + beta + 6.0) / 3.0 +
         m * (alpha + beta + 5.0) - m * (beta + 5.0) / 3.0;
}

// Variant obtained when the v_xx dissipation is written as a full square.
inline double f1p(double alpha, double beta) {
  const double h = (alpha + beta + 6.0) / 2.0;
  return (beta + 5.0) * (alpha + beta + 7.0) / 6.0 + (alpha + 1.0) * (beta + 5.0) / 2.0 - h * h;
}

inline double f2p(int m, double alpha, double beta) {
  return m * (alpha + beta + 5.0) - 2.0 * m * (alpha + 1.0) - m * (beta + 5.0) / 3.0;
}

// Density-dependent model counterparts. They are transcribed separately and
// happen to coincide with f1, f2, f1p, f2p.
inline double f3(double alpha, double beta) {
  return (beta + 5.0) * (alpha + beta + 7.0) / 6.0 + (alpha + 1.0) * (beta + 5.0) / 2.0 -
         (alpha + beta + 6.0) * (alpha + beta + 7.0) / 3.0;
}

inline double f4(int m, double alpha, double beta) {
  return -m * (2.0 * alpha + 3.0) + 2.0 * m * (alpha + beta + 6.0) / 3.0 +
         m * (alpha + beta + 5.0) - m * (beta + 5.0) / 3.0;
}

inline double f3p(double alpha, double beta) {
  return (beta + 5.0) * (alpha + beta + 7.0) / 6.0 + (alpha + 1.0) * (beta + 5.0) / 2.0 -
         std::pow((alpha + beta + 6.0) / 2.0, 2);
}

inline double f4p(int m, double alpha, double beta) {
  return m * (alpha + beta + 5.0) - 2.0 * m * (alpha + 1.0) - m * (beta + 5.0) / 3.0;
}

/// Radicand -2(beta+2)(beta+5) of the f1p-type bounds.
inline double radicand_quadratic(double beta) { return -2.0 * (beta + 2.0) * (beta + 5.0); }

/// Radicand -2 beta^2 - 22 beta - 59 of the f1-type bounds.
inline double radicand_cubic_branch(double beta) { return -2.0 * beta * beta - 22.0 * beta - 59.0; }

struct RegimeVerdict {
  Theorem theorem = Theorem::T1_1;
  std::vector<std::string> matched_cases;
  /// "case.inequality" -> slack; positive means strictly satisfied.
  std::map<std::string, double> slacks;

  [[nodiscard]] bool matched() const { return !matched_cases.empty(); }
  [[nodiscard]] bool has_case(const std::string& label) const {
    return std::find(matched_cases.begin(), matched_cases.end(), label) != matched_cases.end();
  }
  /// Smallest slack among the inequalities of one case (NaN if unknown case).
  [[nodiscard]] double min_slack(const std::string& label) const {
    double best = std::numeric_limits<double>::quiet_NaN();
    const std::string prefix = label + ".";
    for (const auto& [key, value] : slacks) {
      if (key.rfind(prefix, 0) != 0) continue;
      best = std::isnan(best) ? value : std::min(best, value);
    }
    return best;
  }
};

constexpr double kDefaultEqTol = 1e-12;

namespace detail {

enum class Rel { Ge, Gt, Eq };

struct Condition {
  std::string label;
  double slack;
  Rel rel;
};

inline bool satisfied(const Condition& c, double eq_tol) {
  switch (c.rel) {
    case Rel::Ge: return c.slack >= -eq_tol;
    case Rel::Gt: return c.slack > eq_tol;
    case Rel::Eq: return c.slack >= -eq_tol;  // slack is eq_tol - |lhs - rhs|
  }
  return false;
}

class CaseBuilder {
 public:
  CaseBuilder(RegimeVerdict& verdict, std::string label, double eq_tol)
      : verdict_(verdict), label_(std::move(label)), eq_tol_(eq_tol) {}

  CaseBuilder& ge(const std::string& name, double slack) { return add(name, slack, Rel::Ge); }
  CaseBuilder& gt(const std::string& name, double slack) { return add(name, slack, Rel::Gt); }
  CaseBuilder& eq(const std::string& name, double lhs, double rhs) {
    return add(name, eq_tol_ - std::fabs(lhs - rhs), Rel::Eq);
  }

  /// Marks the case empty at this beta when a radicand is negative; the
  /// radicand itself is recorded as the slack.
  [[nodiscard]] bool radicand(const std::string& name, double value) {
    add(name, value, Rel::Ge);
    return value >= 0.0;
  }

  void finish() {
    if (ok_) verdict_.matched_cases.push_back(label_);
  }

 private:
  CaseBuilder& add(const std::string& name, double slack, Rel rel) {
    verdict_.slacks[label_ + "." + name] = slack;
    if (!satisfied(Condition{name, slack, rel}, eq_tol_)) ok_ = false;
    return *this;
  }

  RegimeVerdict& verdict_;
  std::string label_;
  double eq_tol_;
  bool ok_ = true;
};

inline void case_common_i(RegimeVerdict& v, double beta, double gamma, double eq_tol) {
  CaseBuilder c(v, "i", eq_tol);
  c.ge("beta_lo", beta + 3.0).ge("beta_hi", -2.0 - beta).ge("gamma", gamma - 1.0);
  c.finish();
}

inline double lower_quadratic(double beta) {
  return (beta + 2.0 - std::sqrt(radicand_quadratic(beta))) / 2.0;
}
inline double upper_quadratic(double beta) {
  return (beta + 2.0 + std::sqrt(radicand_quadratic(beta))) / 2.0;
}
inline double lower_cubic(double beta) { return (-3.0 - std::sqrt(radicand_cubic_branch(beta))) / 2.0; }
inline double upper_cubic(double beta) { return (-3.0 + std::sqrt(radicand_cubic_branch(beta))) / 2.0; }

}  // namespace detail

/// Classifies a parameter triple against every case of the chosen theorem.
/// Inequalities follow the printed strict/non-strict symbols; slack is
/// (satisfied side) - (bound).
inline RegimeVerdict classify(double alpha, double beta, double gamma, Theorem theorem,
                              double eq_tol = kDefaultEqTol) {
  if (std::isnan(alpha) || std::isnan(beta) || std::isnan(gamma))
    throw std::domain_error("classify: NaN parameter");
  using detail::CaseBuilder;
  const double sqrt3 = std::sqrt(3.0);
  RegimeVerdict v;
  v.theorem = theorem;

  detail::case_common_i(v, beta, gamma, eq_tol);

  if (theorem == Theorem::T1_1) {
    {
      CaseBuilder c(v, "ii", eq_tol);
      c.ge("beta_lo", beta - (-7.0 - sqrt3) / 2.0).gt("beta_hi", -3.0 - beta);
      c.gt("gamma", gamma - (-beta - 2.0));
      if (c.radicand("radicand", radicand_quadratic(beta)))
        c.gt("alpha_lo", alpha - detail::lower_quadratic(beta));
      c.ge("alpha_hi", beta + 3.0 - alpha);
      c.finish();
    }
    {
      CaseBuilder c(v, "iii", eq_tol);
      c.ge("beta_lo", beta + 5.0).ge("beta_hi", -14.0 / 3.0 - beta);
      c.gt("gamma", gamma - (-beta - 2.0));
      if (c.radicand("radicand", radicand_cubic_branch(beta)))
        c.gt("alpha_lo", alpha - detail::lower_cubic(beta));
      c.ge("alpha_hi", beta + 3.0 - alpha);
      c.finish();
    }
  } else {
    {
      CaseBuilder c(v, "ii", eq_tol);
      c.eq("alpha_eq", alpha, (beta + 3.0) / 2.0).gt("beta_hi", -3.0 - beta);
      c.gt("gamma", gamma - (-beta - 2.0));
      c.finish();
    }
    {
      CaseBuilder c(v, "iii", eq_tol);
      c.ge("beta_lo", beta + 4.0).gt("beta_hi", -3.0 - beta);
      c.gt("gamma", gamma - (-beta - 2.0));
      if (c.radicand("radicand", radicand_quadratic(beta)))
        c.gt("alpha_lo", alpha - detail::lower_quadratic(beta));
      c.ge("alpha_hi", (beta + 4.0) / 3.0 - alpha);
      c.finish();
    }
    {
      CaseBuilder c(v, "iv", eq_tol);
      c.ge("beta_lo", beta + 5.0).gt("beta_hi", -4.0 - beta);
      c.gt("gamma", gamma - (-beta - 2.0));
      if (c.radicand("radicand", radicand_quadratic(beta))) {
        c.gt("alpha_lo", alpha - detail::lower_quadratic(beta));
        c.gt("alpha_hi", detail::upper_quadratic(beta) - alpha);
      }
      c.finish();
    }
    {
      CaseBuilder c(v, "v", eq_tol);
      c.ge("beta_lo", beta - (-11.0 - sqrt3) / 2.0).ge("beta_hi", (-11.0 + sqrt3) / 2.0 - beta);
      c.gt("gamma", gamma - (-beta - 2.0));
      if (c.radicand("radicand", radicand_cubic_branch(beta))) {
        c.gt("alpha_lo", alpha - detail::lower_cubic(beta));
        c.gt("alpha_hi", detail::upper_cubic(beta) - alpha);
      }
      c.finish();
    }
  }
  return v;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct SweepCell {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  RegimeVerdict verdict;
};

/// Row-major raster (beta rows, alpha columns) of verdicts. A resolution of
/// 1 on an axis samples the range midpoint; otherwise both endpoints are
/// included.
inline std::vector<SweepCell> sweep_regions(Range alpha_range, Range beta_range, double gamma,
                                            Theorem theorem, int alpha_resolution,
                                            int beta_resolution,
                                            double eq_tol = kDefaultEqTol) {
  const auto finite = [](Range r) { return std::isfinite(r.lo) && std::isfinite(r.hi); };
  if (!finite(alpha_range) || !finite(beta_range) || !std::isfinite(gamma))
    throw std::domain_error("sweep_regions: non-finite range");
  if (alpha_resolution < 1 || beta_resolution < 1)
    throw std::domain_error("sweep_regions: zero-size raster");
  if ((alpha_resolution > 1 && !(alpha_range.hi > alpha_range.lo)) ||
      (beta_resolution > 1 && !(beta_range.hi > beta_range.lo)))
    throw std::domain_error("sweep_regions: zero-size range");

  const auto sample = [](Range r, int n, int i) {
    if (n == 1) return 0.5 * (r.lo + r.hi);
    return r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  std::vector<SweepCell> cells;
  cells.reserve(static_cast<std::size_t>(alpha_resolution) * beta_resolution);
  for (int j = 0; j < beta_resolution; ++j) {
    const double beta = sample(beta_range, beta_resolution, j);
    for (int i = 0; i < alpha_resolution; ++i) {
      const double alpha = sample(alpha_range, alpha_resolution, i);
      cells.push_back({alpha, beta, gamma, classify(alpha, beta, gamma, theorem, eq_tol)});
    }
  }
  return cells;
}

/// All case labels a theorem defines, in print order.
inline std::vector<std::string> case_labels(Theorem theorem) {
  if (theorem == Theorem::T1_1) return {"i", "ii", "iii"};
  return {"i", "ii", "iii", "iv", "v"};
}

/// CSV raster: alpha, beta, gamma, theorem, matched_cases, then one
/// slack_min_<case> column per case.
inline void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells, Theorem theorem) {
  const auto labels = case_labels(theorem);
  os << "alpha,beta,gamma,theorem,matched_cases";
  for (const auto& l : labels) os << ",slack_min_" << l;
  os << '\n';
  const auto old_precision = os.precision(17);
  for (const auto& cell : cells) {
    os << cell.alpha << ',' << cell.beta << ',' << cell.gamma << ',' << to_string(theorem) << ',';
    for (std::size_t k = 0; k < cell.verdict.matched_cases.size(); ++k)
      os << (k ? ";" : "") << cell.verdict.matched_cases[k];
    for (const auto& l : labels) os << ',' << cell.verdict.min_slack(l);
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace nsk::regime
