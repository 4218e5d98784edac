#include "coshift/schatten.hpp"

#include <cmath>
#include <limits>

#include "coshift/linalg.hpp"

namespace coshift {

RVec singular_values(const TruncatedOperator& op) {
  return linalg::singular_values(op.interior());
}

double schatten_norm(const TruncatedOperator& op, double p) {
  if (!(p > 0.0)) throw Error("BadExponent", "Schatten exponent must be > 0");
  const RVec s = singular_values(op);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s[i], p);
  return std::pow(acc, 1.0 / p);
}

SchattenReport schatten_report(const TruncatedOperator& op, double p) {
  if (!(p > 0.0)) throw Error("BadExponent", "Schatten exponent must be > 0");
  SchattenReport rep;
  rep.p = p;
  rep.values = singular_values(op);
  rep.N = op.degree;
  double acc = 0.0;
  const double cutoff = rep.values.size() ? 1e-14 * rep.values[0] : 0.0;
  int below = 0;
  for (Eigen::Index i = 0; i < rep.values.size(); ++i) {
    acc += std::pow(rep.values[i], p);
    if (rep.values[i] < cutoff) ++below;
  }
  rep.norm_p = std::pow(acc, 1.0 / p);
  rep.tail_estimate = below > 0 ? std::pow(below, 1.0 / p) * cutoff : 0.0;
  return rep;
}

const char* to_string(DiffKind k) {
  switch (k) {
    case DiffKind::VvsS: return "V-vs-S";
    case DiffKind::VtildeVsStilde: return "Vtilde-vs-Stilde";
    case DiffKind::WvsI: return "W-vs-I";
  }
  return "?";
}

const char* to_string(ScanFlag f) {
  switch (f) {
    case ScanFlag::Converged: return "CONVERGED";
    case ScanFlag::Diverging: return "DIVERGING";
    case ScanFlag::Indeterminate: return "INDETERMINATE";
  }
  return "?";
}

TruncatedOperator diff_operator(DiffKind kind, const AtomicMeasure& mu,
                                double t, int N) {
  const RationalInner theta = clark_inner(mu);
  const ClarkFrame frame = clark_embedding(mu, theta, N);
  switch (kind) {
    case DiffKind::VvsS: {
      TruncatedOperator op = calculus_V(frame, t);
      op.matrix -=
          mult_by(phi_coeffs(t, N).coeffs, BasisTag::AnalyticFourier, N).matrix;
      return op;
    }
    case DiffKind::VtildeVsStilde:
      return dilation_difference(frame, t);
    case DiffKind::WvsI: {
      TruncatedOperator op = cocycle_W(frame, t);
      op.matrix -= CMat::Identity(op.dim(), op.dim());
      return op;
    }
  }
  throw Error("BadBuilder", "unknown difference kind");
}

ScanResult convergence_scan(DiffKind kind, const AtomicMeasure& mu, double t,
                            double p, const std::vector<int>& Ns,
                            double converged_tol, double diverging_tol) {
  if (Ns.empty()) throw Error("ConfigError", "scan needs dimensions");
  for (size_t i = 1; i < Ns.size(); ++i)
    if (Ns[i] <= Ns[i - 1])
      throw Error("ConfigError", "scan dimensions must be ascending");

  ScanResult res{kind, t, p, {}, ScanFlag::Indeterminate};
  for (int N : Ns)
    res.rows.push_back({N, schatten_norm(diff_operator(kind, mu, t, N), p)});

  const size_t n = res.rows.size();
  bool diverging = false;
  if (n >= 3) {
    diverging = true;
    for (size_t i = n - 3; i + 1 < n; ++i) {
      const double prev = res.rows[i].norm;
      const double next = res.rows[i + 1].norm;
      if (!(prev > 0.0) || (next - prev) / prev <= diverging_tol)
        diverging = false;
    }
  }
  bool converged = false;
  if (n >= 2) {
    const double prev = res.rows[n - 2].norm;
    const double last = res.rows[n - 1].norm;
    converged = prev == 0.0 ? last == 0.0
                            : std::abs(last - prev) / prev < converged_tol;
  }
  res.flag = diverging ? ScanFlag::Diverging
                       : (converged ? ScanFlag::Converged
                                    : ScanFlag::Indeterminate);
  return res;
}

ProbeResult sqrt_t_probe(const AtomicMeasure& mu, const std::vector<double>& ts,
                         int N, double spread_tol) {
  if (ts.empty()) throw Error("ConfigError", "probe needs time points");
  ProbeResult res;
  res.N = N;
  double lo = 0.0, hi = 0.0;
  for (double t : ts) {
    if (!(t > 0.0)) throw Error("ConfigError", "probe times must be positive");
    const double n1 = schatten_norm(diff_operator(DiffKind::VvsS, mu, t, N), 1.0);
    const double ratio = n1 / std::sqrt(t);
    res.rows.push_back({t, n1, ratio});
    lo = lo == 0.0 ? ratio : std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  res.spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  res.pass = res.spread <= spread_tol;
  return res;
}

}  // namespace coshift
