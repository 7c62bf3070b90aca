#include "mgc/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "mgc/applications.hpp"
#include "mgc/bridge_gt.hpp"
#include "mgc/clifford_matchgate.hpp"
#include "mgc/dense.hpp"
#include "mgc/pairing.hpp"
#include "mgc/serialization.hpp"

namespace mgc {

namespace {

class Recorder {
 public:
  explicit Recorder(CheckResult& r) : r_(r) {}

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    r_.status = CheckStatus::Fail;
    if (failures_++ < 4) r_.detail += (r_.detail.empty() ? "" : "; ") + what;
  }
  // records the deviation and fails when it exceeds tol
  void within(double deviation, double tol, const std::string& what) {
    r_.residual = std::max(r_.residual, deviation);
    expect(deviation <= tol, what + " deviates by " + format_real(deviation));
  }
  void note(const std::string& s) { notes_.push_back(s); }
  void finish() {
    if (r_.status == CheckStatus::Pass) {
      for (auto& s : notes_) r_.detail += (r_.detail.empty() ? "" : "; ") + s;
    } else if (failures_ > 4) {
      r_.detail += "; " + std::to_string(failures_ - 4) + " more";
    }
  }

 private:
  CheckResult& r_;
  int failures_ = 0;
  std::vector<std::string> notes_;
};

std::string cell(int n, int k) { return "(n=" + std::to_string(n) + ",k=" + std::to_string(k) + ")"; }

std::string big(const BigInt& z) { return z.str(); }

OperatorExpansion random_hermitian(int n, int k, int terms, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> mask(0, (1ULL << (2 * n)) - 1);
  std::normal_distribution<double> g(0, 1);
  OperatorExpansion shape(n, k);
  std::vector<Term> t;
  for (int i = 0; i < terms; ++i) {
    std::vector<std::uint64_t> m(k);
    for (auto& x : m) x = mask(rng);
    t.push_back({shape.pack(m), {g(rng), g(rng)}});
  }
  auto a = OperatorExpansion::from_terms(n, k, std::move(t));
  return 0.5 * (a + op_adjoint(a));
}

struct Context {
  const VerifyOptions& opt;
  bool full() const { return opt.level == VerifyLevel::Full; }
  int samples(int quick, int full_default) const {
    if (opt.samples > 0) return opt.samples;
    return full() ? full_default : quick;
  }
  std::uint64_t seed(int salt) const { return opt.seed * 1000003ULL + static_cast<std::uint64_t>(salt); }
};

// --- criteria ----------------------------------------------------------------

void dimension_formulas(Recorder& rec, const Context& ctx) {
  std::vector<std::pair<int, int>> cells;
  for (int n = 1; n <= 3; ++n)
    for (int k = 2; k <= 4; ++k)
      if (ctx.full() || n * k <= 8) cells.push_back({n, k});
  cells.push_back({1, 5});
  int gated = 0;
  for (auto [n, k] : cells) {
    BigInt formula = commutant_dim(n, k);
    BigInt pairing = pairing_span_rank(n, k).rank;
    BigInt labels = gt_label_count(n, k);
    BigInt gt = labels;
    try {
      check_gt_capacity(n, k);
      gt = static_cast<long long>(gt_basis(n, k).size());
    } catch (const CapacityError&) {
      ++gated;
    }
    rec.expect(pairing == formula, "pairing rank " + big(pairing) + " != " + big(formula) + " at " + cell(n, k));
    rec.expect(gt == formula, "GT cardinality " + big(gt) + " != " + big(formula) + " at " + cell(n, k));
    rec.expect(labels == formula, "GT label count " + big(labels) + " != " + big(formula) + " at " + cell(n, k));
  }
  rec.note(std::to_string(cells.size()) + " cells");
  if (gated) rec.note(std::to_string(gated) + " cell(s) beyond the GT construction gate counted by labels");
}

void commutant_membership(Recorder& rec, const Context& ctx) {
  std::mt19937_64 rng(ctx.seed(2));
  int per_component = ctx.full() ? 10 : 2;
  std::size_t elements = 0;
  for (int n = 1; n <= 2; ++n) {
    std::vector<DenseMatrix> us;
    for (int c = 0; c < 2; ++c)
      for (int s = 0; s < per_component; ++s)
        us.push_back(sample_unitary(random_orthogonal_component(n, c == 1, rng), n));
    for (int k = 2; k <= 4; ++k) {
      if (!ctx.full() && n == 2 && k == 4) continue;
      double worst = 0;
      for (const auto& e : gt_basis(n, k)) {
        DenseMatrix x = to_dense(e.op);
        for (const auto& u : us) worst = std::max(worst, commutator_residual(x, u, k));
        ++elements;
      }
      rec.within(worst, 1e-8, "commutator at " + cell(n, k));
    }
  }
  rec.note(std::to_string(elements) + " elements x " + std::to_string(2 * per_component) + " matchgates");
}

void orthonormality(Recorder& rec, const Context& ctx) {
  for (int n = 1; n <= 2; ++n)
    for (int k = 2; k <= 4; ++k) {
      if (!ctx.full() && n == 2 && k == 4) continue;
      std::vector<OperatorExpansion> ops;
      for (auto& e : gt_basis(n, k)) ops.push_back(std::move(e.op));
      Eigen::MatrixXcd g = gram_matrix(ops);
      double dev = (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
      rec.within(dev, 1e-7, "GT Gram at " + cell(n, k));
    }
  for (int n = 1; n <= 2; ++n)
    for (int k = 1; k <= 4; ++k) {
      auto occs = enumerate_occupancies(n, k);
      std::vector<OperatorExpansion> ops;
      BigInt scale = BigInt(1) << (k * n);
      bool exact = true;
      for (auto& o : occs) {
        ops.push_back(pattern_operator(o, n));
        // every coefficient is exactly +-1, so the norm is an integer count
        BigInt count = 0;
        for (const Term& t : ops.back().terms()) {
          exact = exact && (t.c == cplx(1, 0) || t.c == cplx(-1, 0));
          count += 1;
        }
        BigInt norm2 = scale * count;
        exact = exact && norm2 == scale * pattern_multiplicity(o);
        exact = exact && hs_inner(ops.back(), ops.back()) == cplx(to_double(norm2), 0);
      }
      for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j) exact = exact && hs_inner(ops[i], ops[j]) == cplx(0, 0);
      rec.expect(exact, "pattern norms/orthogonality at " + cell(n, k));
    }
}

void twirl_oracles(Recorder& rec, const Context& ctx) {
  std::mt19937_64 rng(ctx.seed(4));
  int samples = ctx.samples(2000, 20000);
  double worst_ratio = 0;
  for (int k = 2; k <= 3; ++k) {
    auto basis = gt_basis(1, k);
    for (int rep = 0; rep < 10; ++rep) {
      auto w = random_hermitian(1, k, 8, rng);
      auto mc = mc_twirl(to_dense(w), 1, k, samples, ctx.seed(40 + 10 * k + rep));
      double err = (mc.mean - to_dense(matchgate_twirl(w, basis))).norm();
      worst_ratio = std::max(worst_ratio, err / mc.stderr_frobenius);
      rec.expect(err <= 5 * mc.stderr_frobenius, "matchgate twirl vs MC at " + cell(1, k));
    }
  }
  double worst = 0;
  for (int n = 1; n <= 2; ++n)
    for (int k = 1; k <= 3; ++k)
      for (int rep = 0; rep < (ctx.full() ? 5 : 2); ++rep) {
        auto w = random_hermitian(n, k, 10, rng);
        worst = std::max(worst, max_coeff_diff(cm_twirl(w), cm_twirl_exhaustive(w)));
      }
  rec.within(worst, 1e-12, "pattern twirl vs exhaustive average");
  std::ostringstream os;
  os.precision(3);
  os << "MC M=" << samples << ", worst deviation " << worst_ratio << " sigma";
  rec.note(os.str());
}

void vacuum_sector(Recorder& rec, const Context&) {
  for (int n = 1; n <= 2; ++n)
    for (int k = 2; k <= 4; ++k) {
      auto p = vacuum_projector(n, k);
      double worst = 0;
      for (int a = 1; a <= k; ++a)
        for (int b = a + 1; b <= k; ++b) worst = std::max(worst, op_multiply(bridge_operator(a, b, n, k), p).max_abs());
      rec.within(worst, 1e-10, "bridge operators on P0 at " + cell(n, k));
      double tr = std::real(op_trace(p));
      rec.within(std::abs(tr - vacuum_trace(n, k)), 1e-9, "symbolic trace at " + cell(n, k));
      rec.expect(std::llround(tr) == vacuum_trace_exact(n, k), "symbolic trace at " + cell(n, k) + " is not exact");
    }
  for (int n = 1; n <= 3; ++n)
    for (int k = 2; k <= 6; ++k) {
      BigInt mult = sector_multiplicity({k, std::vector<int>(k / 2, 0)}, n);
      rec.expect(vacuum_trace_exact(n, k) == BigRational(mult), "trace formula vs trivial multiplicity at " + cell(n, k));
    }
}

void frame_potentials(Recorder& rec, const Context& ctx) {
  int samples = ctx.samples(2000, 10000);
  for (int n = 1; n <= 2; ++n)
    for (int k = 1; k <= 4; ++k)
      rec.expect(unitary_frame_potential_rmt(n, k) == BigRational(unitary_frame_potential_closed(n, k)),
                 "unitary Gamma product at " + cell(n, k));
  rec.expect(unitary_frame_potential_closed(1, 2) == 3, "unitary FP at (1,2)");
  for (int k = 1; k <= 8; ++k)
    rec.expect(state_frame_potential_closed(1, k, Ensemble::Matchgate) == BigRational(1, 2), "state FP at " + cell(1, k));
  rec.expect(state_frame_potential_closed(2, 4, Ensemble::Matchgate) == BigRational(1, 10), "state FP at (2,4)");
  rec.expect(state_frame_potential_closed(2, 4, Ensemble::CliffordMatchgate) == BigRational(10, 96), "CM state FP at (2,4)");
  for (int n = 1; n <= 4; ++n)
    for (int k = 2; k <= 8; ++k) {
      double exact = to_double(state_frame_potential_closed(n, k, Ensemble::Matchgate));
      rec.within(std::abs(state_frame_potential_selberg(n, k) - exact) / exact, 1e-12, "Selberg form at " + cell(n, k));
    }
  // purity of the twirled vacuum against the closed forms
  for (int n = 1; n <= 2; ++n)
    for (int k = 2; k <= 4; ++k) {
      auto t = matchgate_twirl(vacuum_state(n, k));
      double mg = to_double(state_frame_potential_closed(n, k, Ensemble::Matchgate));
      rec.within(std::abs(std::real(hs_inner(t, t)) - mg), 1e-9, "vacuum purity at " + cell(n, k));
      auto m = cm_vacuum_moment(n, k);
      double cm = to_double(state_frame_potential_closed(n, k, Ensemble::CliffordMatchgate));
      rec.within(std::abs(std::real(hs_inner(m, m)) - cm), 1e-9, "CM vacuum purity at " + cell(n, k));
    }
  auto mc_check = [&](const McEstimate& e, double exact, const std::string& what) {
    rec.expect(std::abs(e.value - exact) <= 4 * e.stderr_, what + ": " + format_real(e.value) + " vs " + format_real(exact));
  };
  mc_check(unitary_frame_potential_mc(1, 2, samples, ctx.seed(61)), 3.0, "unitary MC at (1,2)");
  mc_check(unitary_frame_potential_mc(2, 2, samples, ctx.seed(62)), 5.0, "unitary MC at (2,2)");
  for (int k = 2; k <= 4; ++k)
    mc_check(state_frame_potential_mc(1, k, Ensemble::Matchgate, samples, ctx.seed(63 + k)), 0.5, "state MC at " + cell(1, k));
  mc_check(state_frame_potential_mc(2, 4, Ensemble::Matchgate, samples, ctx.seed(70)), 0.1, "state MC at (2,4)");
  mc_check(state_frame_potential_mc(2, 4, Ensemble::CliffordMatchgate, samples, ctx.seed(71)), 10.0 / 96,
           "CM state MC at (2,4)");
  rec.note("MC M=" + std::to_string(samples));
}

void gram_example(Recorder& rec, const Context&) {
  auto sp = sector_pairings({1, 1, 1, 1}, 1);
  rec.expect(sp.size() == 3, "sector (1,1,1,1) should hold 3 pairing operators");
  std::vector<OperatorExpansion> ops;
  for (auto& [c, op] : sp) ops.push_back(op);
  Eigen::MatrixXcd g = gram_matrix(ops);
  Eigen::MatrixXcd want(3, 3);
  want << 16, 8, 8, 8, 16, 8, 8, 8, 16;
  rec.expect(g.rows() == 3 && g == want, "Gram of sector (1,1,1,1) is not [[16,8,8],[8,16,8],[8,8,16]]");
  std::vector<OperatorExpansion> ops2;
  for (auto& [c, op] : sector_pairings({2, 2, 2, 2}, 1)) ops2.push_back(op);
  rec.expect(!ops2.empty() && span_rank(ops2) == 1, "sector (2,2,2,2) span rank is not 1");
  rec.note(std::to_string(ops2.size()) + " operators in sector (2,2,2,2)");
}

void sre(Recorder& rec, const Context&) {
  for (int n = 1; n <= 2; ++n) {
    double closed = sre_annealed_closed(n);
    rec.within(std::abs(sre_annealed_direct(n) - closed), 1e-9, "direct SRE at n=" + std::to_string(n));
    double expect = n == 1 ? 0.0 : std::log2(1.25);
    rec.within(std::abs(closed - expect), 1e-12, "closed SRE at n=" + std::to_string(n));
    double want = std::pow(4.0, n) * to_double(catalan(n));
    double tr = trace_p0_q4(n);
    rec.within(std::abs(tr - want), 1e-9, "Tr(P0 Q4) at n=" + std::to_string(n));
    rec.expect(std::llround(tr) == std::llround(want), "Tr(P0 Q4) is not the Catalan value");
  }
}

void definetti(Recorder& rec, const Context&) {
  int cells = 0;
  for (int n = 1; n <= 4; ++n)
    for (int k = 2; k <= 50; ++k)
      for (int l = 1; l <= std::min(3, k - 1); ++l) {
        double r = definetti_ratio(n, k, l);
        rec.within(std::abs(r - vacuum_trace(n, k - l) / vacuum_trace(n, k)), 1e-12, "ratio at n=" + std::to_string(n));
        rec.expect(definetti_ratio_exact(n, k, l) == vacuum_trace_exact(n, k - l) / vacuum_trace_exact(n, k),
                   "exact ratio at " + cell(n, k));
        rec.expect(2 * (1 - r) / 2 <= definetti_bound(n, k, l) + 1e-15, "bound fails at " + cell(n, k));
        ++cells;
      }
  rec.note(std::to_string(cells) + " cells");
}

void so_k_algebra(Recorder& rec, const Context& ctx) {
  int max_k = ctx.full() ? 5 : 4;
  long long pairs = 0;
  for (int n = 1; n <= 2; ++n)
    for (int k = 2; k <= max_k; ++k) {
      auto gen = [&](int x, int y) {
        return x < y ? bridge_operator(x, y, n, k) : -1.0 * bridge_operator(y, x, n, k);
      };
      double worst = 0;
      for (int a = 1; a <= k; ++a)
        for (int b = a + 1; b <= k; ++b)
          for (int c = 1; c <= k; ++c)
            for (int d = c + 1; d <= k; ++d) {
              OperatorExpansion rhs(n, k);
              auto add = [&](double s, int x, int y) {
                if (x != y) rhs += (2.0 * s) * gen(x, y);
              };
              if (b == c) add(1, a, d);
              if (a == c) add(-1, b, d);
              if (b == d) add(-1, a, c);
              if (a == d) add(1, b, c);
              worst = std::max(worst, max_coeff_diff(commutator(gen(a, b), gen(c, d)), rhs));
              ++pairs;
            }
      rec.within(worst, 0.0, "commutation relations at " + cell(n, k));
    }
  rec.note(std::to_string(pairs) + " generator pairs");
}

void design_gap_growth(Recorder& rec, const Context&) {
  rec.expect(design_gap_exact(1) == 0, "gap at n=1 is not zero");
  rec.expect(design_gap_exact(2) == BigRational(1, 24), "gap at n=2 is not 1/24");
  BigRational prev = design_gap_exact(2);
  for (int n = 3; n <= 6; ++n) {
    BigRational g = design_gap_exact(n);
    rec.expect(g > prev, "gap does not grow at n=" + std::to_string(n));
    prev = g;
  }
  rec.note("gap(6)=" + format_real(to_double(prev)));
}

void sre_asymptotics(Recorder& rec, const Context&) {
  double exact = sre_annealed_closed(8);
  double leading = sre_asymptotic(8, false);
  double correction = std::abs(sre_asymptotic(8, true) - leading);
  double gap = std::abs(exact - leading);
  rec.expect(gap <= correction, "n=8 gap " + format_real(gap) + " exceeds the 1/n term " + format_real(correction));
  rec.note("gap " + format_real(gap) + " <= " + format_real(correction));
}

void twirl_laws(Recorder& rec, const Context& ctx) {
  std::mt19937_64 rng(ctx.seed(12));
  for (int n = 1; n <= 2; ++n)
    for (int k = 2; k <= (ctx.full() ? 4 : 3); ++k) {
      auto basis = gt_basis(n, k);
      auto w = random_hermitian(n, k, 12, rng);
      auto t = matchgate_twirl(w, basis);
      rec.within(max_coeff_diff(matchgate_twirl(t, basis), t), 1e-8, "idempotence at " + cell(n, k));
      rec.within(std::abs(op_trace(t) - op_trace(w)), 1e-9, "trace at " + cell(n, k));
      rec.within(max_coeff_diff(op_adjoint(t), t), 1e-10, "Hermiticity at " + cell(n, k));
      auto vac = matchgate_twirl(vacuum_state(n, k), basis);
      rec.within(max_coeff_diff(vac, (1.0 / vacuum_trace(n, k)) * vacuum_projector(n, k)), 1e-8,
                 "vacuum twirl at " + cell(n, k));
    }
}

void span_equality(Recorder& rec, const Context& ctx) {
  std::mt19937_64 rng(ctx.seed(13));
  for (auto [n, k] : std::vector<std::pair<int, int>>{{1, 3}, {1, 4}, {2, 3}}) {
    auto basis = gt_basis(n, k);
    auto pairs = pairing_spanning_set(n, k);
    for (int rep = 0; rep < (ctx.full() ? 10 : 3); ++rep) {
      auto w = random_hermitian(n, k, 10, rng);
      rec.within(max_coeff_diff(project_onto_span(pairs, w), matchgate_twirl(w, basis)), 1e-7,
                 "projections differ at " + cell(n, k));
    }
  }
}

void shadows(Recorder& rec, const Context& ctx) {
  std::mt19937_64 rng(ctx.seed(14));
  auto e2 = shadow_inverse_channel(2);
  rec.expect(e2[1].second == 3.0, "inverse eigenvalue at n=2, weight 2");
  for (int rep = 0; rep < 10; ++rep) {
    auto rho = random_hermitian(2, 1, 8, rng);
    OperatorExpansion even(2, 1);
    for (const Term& t : rho.terms())
      if (std::popcount(t.key) % 2 == 0) even += t.c * OperatorExpansion::single(2, 1, {t.key});
    rec.within(max_coeff_diff(apply_shadow_inverse(shadow_channel(rho)), even), 1e-9, "inverse channel");
  }
}

// symbolic string algebra against the Jordan-Wigner matrices
void dense_products(Recorder& rec, const Context& ctx) {
  std::mt19937_64 rng(ctx.seed(15));
  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= (n == 3 ? 1 : 2); ++k)
      for (int rep = 0; rep < 5; ++rep) {
        auto a = random_hermitian(n, k, 6, rng);
        auto b = random_hermitian(n, k, 6, rng);
        double dev = (to_dense(op_multiply(a, b)) - to_dense(a) * to_dense(b)).norm();
        rec.within(dev, 1e-10, "product at " + cell(n, k));
      }
}

using CheckFn = std::function<void(Recorder&, const Context&)>;

struct CheckSpec {
  const char* id;
  const char* name;
  CheckFn fn;
};

}  // namespace

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    default: return "SKIP";
  }
}

std::vector<CheckResult> run_verification(const VerifyOptions& opt) {
  const std::vector<CheckSpec> specs = {
      {"1", "dimension formulas", dimension_formulas},
      {"2", "commutant membership", commutant_membership},
      {"3", "orthonormality", orthonormality},
      {"4", "twirl oracle equivalence", twirl_oracles},
      {"5", "vacuum sector", vacuum_sector},
      {"6", "frame potentials", frame_potentials},
      {"7", "Gram worked example", gram_example},
      {"8", "stabilizer Renyi entropy", sre},
      {"9", "Gaussian de Finetti", definetti},
      {"10", "so(k) algebra", so_k_algebra},
      {"P1", "design gap grows with n", design_gap_growth},
      {"P2", "SRE asymptotics at n=8", sre_asymptotics},
      {"P3", "twirl projector laws", twirl_laws},
      {"P4", "GT and pairing spans agree", span_equality},
      {"P5", "shadow inverse channel", shadows},
      {"P6", "symbolic products match the dense oracle", dense_products},
  };
  Context ctx{opt};
  std::vector<CheckResult> out;
  for (const auto& s : specs) {
    CheckResult r{s.id, s.name, CheckStatus::Pass, 0, ""};
    Recorder rec(r);
    try {
      s.fn(rec, ctx);
      rec.finish();
    } catch (const CapacityError& e) {
      r.status = CheckStatus::Skipped;
      r.detail = std::string("capacity: ") + e.what();
    } catch (const std::exception& e) {
      r.status = CheckStatus::Fail;
      r.detail = std::string("error: ") + e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_report(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  for (const auto& r : results) {
    os << status_name(r.status) << " " << (r.id[0] == 'P' ? "property " : "criterion ") << r.id << ": " << r.name
       << " (residual " << format_real(r.residual) << ")";
    if (!r.detail.empty()) os << " - " << r.detail;
    os << "\n";
  }
  return os.str();
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::none_of(results.begin(), results.end(), [](const CheckResult& r) { return r.status == CheckStatus::Fail; });
}

}  // namespace mgc
