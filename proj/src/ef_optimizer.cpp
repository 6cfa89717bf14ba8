// Entanglement of formation by search over decompositions of rho.
//
// Every decomposition of size L arises from an L x rank isometry U acting on
// the scaled eigenvectors sqrt(lambda_k) e_k. Row rotations of U preserve the
// isometry property, so the search mixes pairs of unnormalized decomposition
// vectors with Givens rotations and keeps improvements.

#include <algorithm>
#include <cmath>
#include <limits>

#include "entkit/error.hpp"
#include "entkit/measures.hpp"
#include "entkit/rng.hpp"
#include "entkit/tolerances.hpp"

namespace entkit {

namespace {

constexpr std::size_t kMaxTerms = 16;
constexpr double kRankCutoff = 1e-14;
constexpr double kMinStep = 1e-7;
constexpr double kWarmStartTolerance = 1e-8;

struct Term {
  ComplexVector v;  // unnormalized, |v|^2 is the weight
  double weight = 0.0;
  double entropy = 0.0;
};

class Evaluator {
 public:
  Evaluator(std::size_t da, std::size_t db) : da_(da), db_(db) {}

  void refresh(Term& t) const {
    t.weight = 0.0;
    for (const auto& x : t.v) t.weight += std::norm(x);
    t.entropy = t.weight > 1e-300 ? entropy(t.v, t.weight) : 0.0;
  }

 private:
  // Entropy of the smaller reduced operator of v / |v|.
  double entropy(const ComplexVector& v, double weight) const {
    const bool left = da_ <= db_;
    const std::size_t d = left ? da_ : db_;
    if (d == 1) return 0.0;
    ComplexMatrix red(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        Complex s{};
        if (left) {
          for (std::size_t k = 0; k < db_; ++k) s += v[i * db_ + k] * std::conj(v[j * db_ + k]);
        } else {
          for (std::size_t k = 0; k < da_; ++k) s += v[k * db_ + i] * std::conj(v[k * db_ + j]);
        }
        red(i, j) = s / weight;
        red(j, i) = std::conj(red(i, j));
      }
    if (d == 2) {
      const double a = red(0, 0).real(), c = red(1, 1).real();
      const double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) / 4.0 + std::norm(red(0, 1))));
      const double mid = (a + c) / 2.0;
      const double ev[2] = {mid + disc, mid - disc};
      return shannon_entropy(ev);
    }
    return shannon_entropy(hermitian_eigenvalues(hermitian_part(red)));
  }

  std::size_t da_;
  std::size_t db_;
};

double total(const std::vector<Term>& terms) {
  double s = 0.0;
  for (const auto& t : terms) s += t.weight * t.entropy;
  return s;
}

void rotate(const Term& x, const Term& y, double theta, Complex phase, Term& out_x, Term& out_y) {
  const double c = std::cos(theta), s = std::sin(theta);
  const std::size_t n = x.v.size();
  out_x.v.resize(n);
  out_y.v.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out_x.v[k] = c * x.v[k] - phase * s * y.v[k];
    out_y.v[k] = std::conj(phase) * s * x.v[k] + c * y.v[k];
  }
}

struct RunResult {
  double value = std::numeric_limits<double>::infinity();
  std::vector<Term> terms;
};

RunResult pattern_search(std::vector<Term> terms, const Evaluator& eval, std::size_t sweeps) {
  for (auto& t : terms) eval.refresh(t);
  double value = total(terms);
  const std::size_t l = terms.size();
  const Complex phases[2] = {Complex(1.0, 0.0), Complex(0.0, 1.0)};
  double step = M_PI / 4.0;
  Term tx, ty;
  for (std::size_t sweep = 0; sweep < sweeps && step > kMinStep; ++sweep) {
    bool improved = false;
    for (std::size_t i = 0; i < l; ++i)
      for (std::size_t j = i + 1; j < l; ++j) {
        const double before = terms[i].weight * terms[i].entropy + terms[j].weight * terms[j].entropy;
        double best_delta = 0.0;
        Term bx, by;
        for (double theta : {step, -step})
          for (const Complex& ph : phases) {
            // Keep doubling the angle while the pair keeps improving.
            for (double t = theta; std::abs(t) <= M_PI / 2.0; t *= 2.0) {
              rotate(terms[i], terms[j], t, ph, tx, ty);
              eval.refresh(tx);
              eval.refresh(ty);
              const double delta = tx.weight * tx.entropy + ty.weight * ty.entropy - before;
              if (!(delta < best_delta - 1e-16)) break;
              best_delta = delta;
              bx = tx;
              by = ty;
            }
          }
        if (best_delta < 0.0) {
          terms[i] = std::move(bx);
          terms[j] = std::move(by);
          improved = true;
        }
      }
    value = total(terms);
    if (!improved) step /= 2.0;
  }
  return {value, std::move(terms)};
}

}  // namespace

EfResult entanglement_formation_mixed(const DensityOperator& rho, const OptimizerBudget& budget,
                                      std::span<const PureDecomposition> warm_starts) {
  const std::size_t da = rho.dim_a(), db = rho.dim_b(), n = rho.dim();
  const auto es = hermitian_eig(rho.matrix());
  std::vector<ComplexVector> scaled;
  for (std::size_t k = 0; k < n; ++k) {
    if (es.eigenvalues[k] <= kRankCutoff) continue;
    auto v = es.eigenvectors.col(k);
    const double w = std::sqrt(es.eigenvalues[k]);
    for (auto& x : v) x *= w;
    scaled.push_back(std::move(v));
  }
  const std::size_t rank = scaled.size();

  EfResult out;
  if (rank == 1) {
    auto v = es.eigenvectors.col(0);
    PureBipartiteState psi(v, da, db);
    out.report = {"ef", reduced_entropy(psi), ReportKind::exact, std::nullopt};
    out.decomposition = {{1.0}, {psi}};
    return out;
  }

  for (const auto& w : warm_starts) {
    if (w.states.empty() || w.states.front().dim_a() != da || w.states.front().dim_b() != db)
      throw DimensionError("entanglement_formation_mixed: warm start dimensions differ");
    if (frobenius_norm(w.matrix() - rho.matrix()) > kWarmStartTolerance)
      throw InvariantError("entanglement_formation_mixed: warm start does not decompose rho");
  }

  const std::size_t terms = std::max(rank, std::min(rank * rank, kMaxTerms));
  const std::size_t seeded = std::max<std::size_t>(budget.restarts, 1);
  const std::size_t jobs = seeded + warm_starts.size();
  const Evaluator eval(da, db);
  std::vector<RunResult> results(jobs);

  auto run = [&](std::size_t job) {
    std::vector<Term> start;
    if (job >= seeded) {
      const auto& w = warm_starts[job - seeded];
      for (std::size_t i = 0; i < w.states.size(); ++i) {
        Term t;
        t.v = w.states[i].amplitudes();
        for (auto& x : t.v) x *= std::sqrt(std::max(0.0, w.weights[i]));
        start.push_back(std::move(t));
      }
    } else {
      // Restart 0 is the eigendecomposition; the rest draw a random isometry.
      ComplexMatrix iso(terms, rank);
      if (job == 0) {
        for (std::size_t k = 0; k < rank; ++k) iso(k, k) = 1.0;
      } else {
        Rng rng(derive_seed(budget.seed, job));
        const auto u = random_unitary(terms, rng);
        for (std::size_t i = 0; i < terms; ++i)
          for (std::size_t k = 0; k < rank; ++k) iso(i, k) = u(i, k);
      }
      start.resize(terms);
      for (std::size_t i = 0; i < terms; ++i) {
        start[i].v.assign(n, Complex{});
        for (std::size_t k = 0; k < rank; ++k)
          for (std::size_t x = 0; x < n; ++x) start[i].v[x] += iso(i, k) * scaled[k][x];
      }
    }
    results[job] = pattern_search(std::move(start), eval, budget.iterations);
  };

  kernels::run_jobs(jobs, budget.execution, run);

  std::size_t best = 0;
  for (std::size_t j = 1; j < jobs; ++j)
    if (results[j].value < results[best].value) best = j;

  for (const auto& t : results[best].terms) {
    if (t.weight <= tol::log_clamp) continue;
    ComplexVector v = t.v;
    const double nv = std::sqrt(t.weight);
    for (auto& x : v) x /= nv;
    out.decomposition.weights.push_back(t.weight);
    out.decomposition.states.emplace_back(std::move(v), da, db);
  }
  out.report = {"ef", results[best].value, ReportKind::upper_bound, OptimizerInfo{seeded, budget.iterations, budget.seed}};
  return out;
}

}  // namespace entkit
