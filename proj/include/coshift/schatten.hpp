#pragma once

// Singular values and Schatten p-norms of interior blocks, convergence
// scans over the truncation dimension, and the sqrt(t) trace-norm probe.

#include <vector>

#include "coshift/operators.hpp"

namespace coshift {

struct SchattenReport {
  double p = 0.0;
  RVec values;  // descending
  double norm_p = 0.0;
  int N = 0;
  double tail_estimate = 0.0;  // bound on sigma below the machine cutoff
};

/// Singular values of the interior block, descending.
RVec singular_values(const TruncatedOperator& op);

double schatten_norm(const TruncatedOperator& op, double p);

SchattenReport schatten_report(const TruncatedOperator& op, double p);

enum class DiffKind { VvsS, VtildeVsStilde, WvsI };
enum class ScanFlag { Converged, Diverging, Indeterminate };

const char* to_string(DiffKind k);
const char* to_string(ScanFlag f);

struct ScanRow {
  int N;
  double norm;
};

struct ScanResult {
  DiffKind kind;
  double t;
  double p;
  std::vector<ScanRow> rows;
  ScanFlag flag;
};

/// Interior difference operator for one scan cell; frames are rebuilt per
/// truncation dimension.
TruncatedOperator diff_operator(DiffKind kind, const AtomicMeasure& mu,
                                double t, int N);

ScanResult convergence_scan(DiffKind kind, const AtomicMeasure& mu, double t,
                            double p, const std::vector<int>& Ns,
                            double converged_tol = 0.02,
                            double diverging_tol = 0.10);

struct ProbeRow {
  double t;
  double norm1;
  double ratio;  // norm1 / sqrt(t)
};

struct ProbeResult {
  std::vector<ProbeRow> rows;
  double spread = 0.0;  // max ratio / min ratio
  bool pass = false;
  int N = 0;
};

ProbeResult sqrt_t_probe(const AtomicMeasure& mu, const std::vector<double>& ts,
                         int N, double spread_tol = 4.0);

}  // namespace coshift
