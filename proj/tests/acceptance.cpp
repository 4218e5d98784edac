// Acceptance suite: one numbered criterion per check battery, each printing
// a single PASS/FAIL line (plus indented measurements). Run everything or a
// single criterion with --criterion <k>.
//
// Three checks (the phi Parseval completeness in criterion 6, the cocycle
// composition law in criterion 7, and the dilation defect identity in
// criterion 8) pin tolerances that sit three to four orders of magnitude
// below the truncation floor of the singular inner symbol: its Taylor tail
// carries Theta(1/sqrt(N)) of mass, so no feasible window reaches them.
// They are asserted as specified and report the measured floor.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "coshift/experiment.hpp"
#include "coshift/linalg.hpp"

using namespace coshift;

namespace {

constexpr int kDim = 512;

struct Fixture {
  std::string name;
  AtomicMeasure mu;
};

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> fx = {
      {"delta-minus-one", AtomicMeasure::make({{kPi, 1.0}})},
      {"plus-minus-i",
       AtomicMeasure::make({{kPi / 2, 0.5}, {3 * kPi / 2, 0.5}})},
      {"three-atom", AtomicMeasure::make({{2 * kPi / 3, 0.2},
                                          {kPi, 0.5},
                                          {3 * kPi / 2, 0.3}})}};
  return fx;
}

const ClarkFrame& frame_at(const Fixture& fx, int N) {
  static std::map<std::string, ClarkFrame> cache;
  const std::string key = fx.name + "/" + std::to_string(N);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, clark_embedding(fx.mu, clark_inner(fx.mu), N)).first;
  return it->second;
}

struct Criterion {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "  ok   " : "  FAIL ") + what);
  }
  void note(const std::string& what) { notes.push_back("       " + what); }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// ---- criteria ----

Criterion criterion_1() {
  Criterion c;
  const CVec t1 = clark_inner(fixtures()[0].mu).taylor(3);
  CVec e1 = CVec::Zero(4);
  e1[1] = -1.0;
  c.require((t1 - e1).cwiseAbs().maxCoeff() <= 1e-12,
            "clark(delta_{-1}) = -z coefficientwise (" +
                fmt((t1 - e1).cwiseAbs().maxCoeff()) + ")");
  const CVec t2 = clark_inner(fixtures()[1].mu).taylor(4);
  CVec e2 = CVec::Zero(5);
  e2[2] = -1.0;
  c.require((t2 - e2).cwiseAbs().maxCoeff() <= 1e-12,
            "clark(half(d_i + d_{-i})) = -z^2 coefficientwise (" +
                fmt((t2 - e2).cwiseAbs().maxCoeff()) + ")");
  return c;
}

Criterion criterion_2() {
  Criterion c;
  for (const auto& fx : fixtures()) {
    const ClarkFrame& f = frame_at(fx, kDim);
    c.require(f.gram_deviation <= 1e-8,
              fx.name + ": Gram deviation " + fmt(f.gram_deviation));
    Eigen::ComplexEigenSolver<CMat> eig(f.clark_unitary);
    double worst = 0.0, gap = 1e300;
    for (int j = 0; j < fx.mu.size(); ++j) {
      double best = 1e300;
      for (int l = 0; l < fx.mu.size(); ++l)
        best = std::min(best, std::abs(eig.eigenvalues()[j] - fx.mu.xi(l)));
      worst = std::max(worst, best);
      gap = std::min(gap, std::abs(eig.eigenvalues()[j] - 1.0));
    }
    c.require(worst <= 1e-8, fx.name + ": eigenvalues vs atoms " + fmt(worst));
    c.require(gap >= 1e-6, fx.name + ": spectrum gap at 1 " + fmt(gap));
  }
  return c;
}

Criterion criterion_3() {
  Criterion c;
  for (const auto& fx : fixtures()) {
    const ClarkFrame& f = frame_at(fx, kDim);
    const TruncatedOperator v = build_V(f.theta, kDim);
    CMat diag = CMat::Zero(fx.mu.size(), fx.mu.size());
    for (int j = 0; j < fx.mu.size(); ++j) diag(j, j) = fx.mu.xi(j);
    const double r =
        linalg::norm2(f.omega * diag - linalg::mat_prod(v.matrix, f.omega));
    c.require(r <= 1e-7, fx.name + ": intertwining " + fmt(r));
  }
  return c;
}

Criterion criterion_4() {
  Criterion c;
  for (const auto& fx : fixtures()) {
    const ClarkFrame& f = frame_at(fx, kDim);
    TruncatedOperator v = build_V(f.theta, kDim);
    v.matrix = linalg::adj_prod(v.matrix, v.matrix);
    v.matrix -= CMat::Identity(kDim + 1, kDim + 1);
    c.require(linalg::norm2(v.interior()) <= 1e-7,
              fx.name + ": V isometry " + fmt(linalg::norm2(v.interior())));

    const TruncatedOperator vt = build_Vtilde(f.theta, kDim);
    TruncatedOperator a = vt, b = vt;
    a.matrix = linalg::adj_prod(vt.matrix, vt.matrix);
    a.matrix -= CMat::Identity(vt.dim(), vt.dim());
    b.matrix = linalg::mat_prod(vt.matrix, CMat(vt.matrix.adjoint()));
    b.matrix -= CMat::Identity(vt.dim(), vt.dim());
    const double uni =
        std::max(linalg::norm2(a.interior()), linalg::norm2(b.interior()));
    c.require(uni <= 1e-7, fx.name + ": Vtilde unitarity " + fmt(uni));

    double back = 0.0;
    for (int m = 1; m < kDim; ++m) {
      CVec row = vt.matrix.row(kDim - m).adjoint();
      row[kDim - m - 1] -= 1.0;
      back = std::max(back, row.norm());
    }
    c.require(back <= 1e-10, fx.name + ": backward action " + fmt(back));
  }
  const MultiMeasureSystem sys =
      make_system({fixtures()[0].mu, fixtures()[0].mu}, 4.0, 1.0);
  TruncatedOperator multi = build_multi_V(sys, kDim);
  multi.matrix = linalg::adj_prod(multi.matrix, multi.matrix);
  multi.matrix -= CMat::Identity(multi.dim(), multi.dim());
  c.require(linalg::norm2(multi.interior()) <= 1e-6,
            "two-component dilation unitarity " +
                fmt(linalg::norm2(multi.interior())));
  return c;
}

Criterion criterion_5() {
  Criterion c;
  for (const auto& fx : fixtures()) {
    const ClarkFrame& f = frame_at(fx, kDim);
    const TruncatedOperator v = build_V(f.theta, kDim);
    const WoldReport w = wold_check(v, f.theta, f);
    c.require(w.unitary_rank == fx.mu.size() && w.unitary_angle_sin <= 1e-4,
              fx.name + ": unitary-part angle " + fmt(w.unitary_angle_sin) +
                  " rank " + std::to_string(w.unitary_rank));
    c.require(w.beurling_residual <= 1e-7,
              fx.name + ": Beurling action " + fmt(w.beurling_residual));
  }
  return c;
}

Criterion criterion_6() {
  Criterion c;
  const std::vector<double> grid{0.25, 0.5, 1.0};
  for (const auto& fx : fixtures()) {
    const ClarkFrame& f = frame_at(fx, kDim);
    std::map<double, TruncatedOperator> mv, mvt;
    const auto getv = [&](double t) -> const TruncatedOperator& {
      auto it = mv.find(t);
      if (it == mv.end()) it = mv.emplace(t, calculus_V(f, t)).first;
      return it->second;
    };
    const auto getvt = [&](double t) -> const TruncatedOperator& {
      auto it = mvt.find(t);
      if (it == mvt.end()) it = mvt.emplace(t, calculus_Vtilde(f, t)).first;
      return it->second;
    };
    double sg_v = 0.0, sg_vt = 0.0;
    for (double t : grid)
      for (double s : grid) {
        if (t > s) continue;
        TruncatedOperator r = getv(t);
        r.matrix = linalg::mat_prod(getv(t).matrix, getv(s).matrix) -
                   getv(t + s).matrix;
        sg_v = std::max(sg_v, linalg::norm2(r.interior()));
        TruncatedOperator rt = getvt(t);
        rt.matrix = linalg::mat_prod(getvt(t).matrix, getvt(s).matrix) -
                    getvt(t + s).matrix;
        sg_vt = std::max(sg_vt, linalg::norm2(rt.interior()));
      }
    c.require(sg_v <= 1e-6, fx.name + ": semigroup law phi_t(V) " + fmt(sg_v));
    c.require(sg_vt <= 1e-5,
              fx.name + ": semigroup law phi_t(Vtilde) " + fmt(sg_vt));
    c.require((calculus_V(f, 0.0).matrix - CMat::Identity(kDim + 1, kDim + 1))
                      .norm() == 0.0,
              fx.name + ": phi_0 identity, exactly");
  }
  double deficit = 0.0;
  for (double t : {0.25, 0.5, 1.0, 2.0})
    deficit =
        std::max(deficit, 1.0 - phi_coeffs(t, kDim).coeffs.squaredNorm());
  c.require(deficit <= 1e-6,
            "phi Parseval deficit at N=512, t<=2 (" + fmt(deficit) + ")");
  if (deficit > 1e-6)
    c.note("deficit scales like 0.45 sqrt(t)/sqrt(N); 1e-6 needs N ~ 1e11");
  return c;
}

Criterion criterion_7() {
  Criterion c;
  for (const auto& fx : fixtures()) {
    const ClarkFrame& f = frame_at(fx, kDim);
    c.require((cocycle_W(f, 0.0).matrix -
               CMat::Identity(2 * kDim + 1, 2 * kDim + 1))
                      .norm() == 0.0,
              fx.name + ": W_0 = I, exactly");
    std::map<double, TruncatedOperator> wcache;
    const auto getw = [&](double t) -> const TruncatedOperator& {
      auto it = wcache.find(t);
      if (it == wcache.end()) it = wcache.emplace(t, cocycle_W(f, t)).first;
      return it->second;
    };
    double law = 0.0;
    for (double t : {0.25, 0.5})
      for (double s : {0.25, 0.5}) {
        const CMat st = mult_by(phi_coeffs(t, 2 * kDim).coeffs,
                                BasisTag::BilateralFourier, kDim)
                            .matrix;
        CMat rhs = linalg::mat_prod(getw(t).matrix, st);
        rhs = linalg::mat_prod(rhs, getw(s).matrix);
        rhs = linalg::mat_prod(rhs, CMat(st.adjoint()));
        TruncatedOperator r = getw(t + s);
        r.matrix -= rhs;
        law = std::max(law, linalg::norm2(r.interior()));
      }
    c.require(law <= 1e-4, fx.name + ": cocycle law (" + fmt(law) + ")");
  }
  if (!c.pass)
    c.note("law residual is pinned by the phi tail at ~1e-2 for N=512");
  return c;
}

Criterion criterion_8() {
  Criterion c;
  std::mt19937 rng(12345);
  const auto uni = [&rng]() {
    return 2.0 * (static_cast<double>(rng()) / 4294967296.0) - 1.0;
  };
  for (const auto& fx : fixtures()) {
    const ClarkFrame& f = frame_at(fx, kDim);
    for (double t : {0.5, 1.0}) {
      const CVec phi = phi_coeffs(t, 2 * kDim).coeffs;
      const TruncatedOperator diff = dilation_difference(f, t);
      double worst = 0.0;
      bool gated = false;
      for (int k = 0; k < 5; ++k) {
        CVec h = CVec::Zero(kDim + 1);
        for (int d = 0; d <= 8; ++d) h[d] = Complex(uni(), uni());
        const CVec v = project_model(phi, h);
        try {
          worst = std::max(worst, defect_Q(f, diff, t, v));  // gate at 1e-6
        } catch (const Error&) {
          gated = true;
          worst = std::max(worst, defect_Q(f, diff, t, v, 0.25));
        }
      }
      std::ostringstream what;
      what << fx.name << " t=" << t << ": defect residual " << fmt(worst);
      if (gated) what << " (membership gate at 1e-6 rejects truncations)";
      c.require(!gated && worst <= 1e-5, what.str());
    }
  }
  if (!c.pass)
    c.note("identity holds at the phi-tail floor ~6e-2; 1e-5 needs N ~ 1e10");
  return c;
}

Criterion criterion_9() {
  Criterion c;
  const std::vector<double> ts{0.25, 0.5, 1.0, 2.0};
  for (const auto& fx : fixtures()) {
    const ProbeResult pr = sqrt_t_probe(fx.mu, ts, kDim);
    c.require(pr.pass, fx.name + ": sqrt(t) ratio spread " + fmt(pr.spread));
    double drift = 0.0;
    for (double t : ts) {
      const double a =
          schatten_norm(diff_operator(DiffKind::VvsS, fx.mu, t, 256), 1.0);
      const double b =
          schatten_norm(diff_operator(DiffKind::VvsS, fx.mu, t, 512), 1.0);
      drift = std::max(drift, std::abs(b - a) / a);
    }
    c.require(drift <= 0.05,
              fx.name + ": trace norm drift 256->512 " + fmt(drift));
  }
  return c;
}

Criterion criterion_10() {
  Criterion c;
  const std::vector<int> Ns{64, 128, 256, 512, 1024};
  for (const auto& fx : fixtures()) {
    for (double p : {2.0, 1.5}) {
      const ScanResult r =
          convergence_scan(DiffKind::VtildeVsStilde, fx.mu, 1.0, p, Ns);
      std::ostringstream what;
      what << fx.name << " p=" << p << ": dilation difference "
           << to_string(r.flag) << " (last "
           << fmt(r.rows[Ns.size() - 1].norm) << ")";
      c.require(r.flag == ScanFlag::Converged, what.str());
    }
    const ScanResult w = convergence_scan(DiffKind::WvsI, fx.mu, 1.0, 1.0, Ns);
    c.require(w.flag == ScanFlag::Diverging,
              fx.name + ": W-vs-I trace scan " + std::string(to_string(w.flag)));
    const ParfenovSum n1 = parfenov_sum(clark_inner(fx.mu), 1.0, 512, 16);
    c.require(n1.verdict == TailVerdict::DivergentTrend &&
                  n1.increment_ratio > 0.5 && n1.increment_ratio < 1.5,
              fx.name + ": harmonic N_1 signature (increment ratio " +
                  fmt(n1.increment_ratio) + ")");
  }
  return c;
}

Criterion criterion_11() {
  Criterion c;
  const double targets[2] = {4.0 * kPi, 8.0 * kPi};
  for (int i = 0; i < 2; ++i) {
    const RationalInner th = clark_inner(fixtures()[i].mu);
    const ParfenovSum s = parfenov_sum(th, 2.0, 512, 16);
    const double total = s.partial + s.tail_bound;
    c.require(std::abs(total - targets[i]) / targets[i] <= 0.01,
              fixtures()[i].name + ": N_2 = " + fmt(total) + " vs " +
                  fmt(targets[i]));
  }
  for (const auto& fx : fixtures()) {
    const RationalInner th = clark_inner(fx.mu);
    const EmbeddingReport rep =
        embedding_operator(th, 1.0, kDim, {1.5, 2.0, 3.0}, 512, 16);
    for (const auto& cmp : rep.comparisons) {
      std::ostringstream what;
      what << fx.name << " p=" << cmp.p << ": ||J||^p " << fmt(cmp.op_power)
           << " <= 1.1 N_p " << fmt(1.1 * cmp.parfenov_value);
      c.require(cmp.within, what.str());
    }
  }
  return c;
}

Criterion criterion_12() {
  Criterion c;
  const double v = boundary_moment(clark_inner(fixtures()[0].mu), 4.0);
  c.require(std::abs(v - 1.0) <= 1e-6,
            "boundary moment for -z at q=4: " + fmt(v));
  bool ok = true;
  double v3 = 0.0;
  try {
    v3 = boundary_moment(clark_inner(fixtures()[2].mu), 4.0);
    ok = std::isfinite(v3) && v3 > 0.0;
  } catch (const Error&) {
    ok = false;
  }
  c.require(ok, "three-atom moment converges (" + fmt(v3) + ")");
  return c;
}

Criterion criterion_13() {
  Criterion c;
#ifdef COSHIFT_CLI_PATH
  const std::string cli = COSHIFT_CLI_PATH;
  const std::string cfgdir = COSHIFT_CONFIG_DIR;
  const std::string base = cli + " verify --measure " + cfgdir +
                           "/delta_minus_one.json --dim 512 --no-timestamp";
  const int rc1 = std::system((base + " --out acc_verify_1.json").c_str());
  const int rc2 = std::system((base + " --out acc_verify_2.json").c_str());
  const auto slurp = [](const char* p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = slurp("acc_verify_1.json");
  const std::string b = slurp("acc_verify_2.json");
  c.require(!a.empty() && a == b,
            "two verify runs are byte-identical (" +
                std::to_string(a.size()) + " bytes)");
  const bool completed =
      WIFEXITED(rc1) && WIFEXITED(rc2) &&
      WEXITSTATUS(rc1) == WEXITSTATUS(rc2) && WEXITSTATUS(rc1) <= 1;
  c.require(completed, "verify exit status is stable and in {0,1}");
  c.note("exit 1 reflects the three documented floor-bound checks");
#else
  c.require(false, "CLI path not configured");
#endif
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--criterion" && i + 1 < argc)
      only = std::atoi(argv[i + 1]);
  }
  const std::vector<std::pair<const char*, std::function<Criterion()>>> all = {
      {"Clark closed forms", criterion_1},
      {"frame unitarity and spectrum", criterion_2},
      {"intertwining", criterion_3},
      {"isometry/unitarity with the backward action", criterion_4},
      {"Wold structure", criterion_5},
      {"functional calculus laws", criterion_6},
      {"cocycle law", criterion_7},
      {"dilation defect identity", criterion_8},
      {"sqrt(t) trace bound", criterion_9},
      {"Schatten separation across exponents", criterion_10},
      {"interval sums and embedding comparison", criterion_11},
      {"boundary moment", criterion_12},
      {"report determinism", criterion_13},
  };

  int failures = 0;
  for (size_t k = 0; k < all.size(); ++k) {
    if (only != 0 && only != static_cast<int>(k + 1)) continue;
    const Criterion c = all[k].second();
    std::printf("criterion %02zu %s: %s\n", k + 1, c.pass ? "PASS" : "FAIL",
                all[k].first);
    for (const auto& line : c.notes) std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    if (!c.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
