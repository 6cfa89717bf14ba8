// Relative entropy of entanglement by pairwise Frank-Wolfe over mixtures of
// product pure states.
//
// The objective F(sigma) = S(rho || sigma) is convex. Its gradient is
// -(1/ln 2) Dlog_sigma[rho], which in the eigenbasis of sigma is the
// Hadamard product of rho with the divided differences of log. The linear
// oracle over product states alternates between local minimum eigenvectors.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "entkit/error.hpp"
#include "entkit/measures.hpp"
#include "entkit/rng.hpp"
#include "entkit/tolerances.hpp"

namespace entkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupportLeak = 1e-12;
constexpr double kPruneWeight = 1e-14;
constexpr int kGoldenIterations = 36;
constexpr int kOracleSweeps = 25;
constexpr std::size_t kOracleRandomStarts = 2;

struct Atom {
  double weight;
  ComplexVector a;
  ComplexVector b;
  ComplexVector v;  // a (x) b
};

Atom make_atom(double w, ComplexVector a, ComplexVector b) {
  auto v = tensor(a, b);
  return {w, std::move(a), std::move(b), std::move(v)};
}

void add_outer(ComplexMatrix& m, const ComplexVector& v, double w) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex vi = w * v[i];
    if (vi == Complex{}) continue;
    for (std::size_t j = 0; j < n; ++j) m(i, j) += vi * std::conj(v[j]);
  }
}

double quadratic_form(const ComplexMatrix& g, const ComplexVector& v) { return inner(v, g * v).real(); }

class Problem {
 public:
  Problem(const DensityOperator& rho)
      : rho_(rho.matrix()), da_(rho.dim_a()), db_(rho.dim_b()), neg_entropy_(-von_neumann_entropy(rho.matrix())) {}

  std::size_t dim_a() const { return da_; }
  std::size_t dim_b() const { return db_; }
  std::size_t dim() const { return da_ * db_; }

  double value(const ComplexMatrix& sigma, HermitianEigenSystem* keep = nullptr) const {
    auto es = hermitian_eig(hermitian_part(sigma));
    const auto rotated = es.eigenvectors.adjoint() * rho_ * es.eigenvectors;
    double cross = 0.0;
    for (std::size_t k = 0; k < es.eigenvalues.size(); ++k) {
      const double weight = rotated(k, k).real();
      const double mu = es.eigenvalues[k];
      if (mu <= tol::log_clamp) {
        if (weight > kSupportLeak) return kInf;
        continue;
      }
      cross -= weight * std::log2(mu);
    }
    if (keep) *keep = std::move(es);
    return neg_entropy_ + cross;
  }

  ComplexMatrix gradient(const HermitianEigenSystem& es) const {
    const auto& vecs = es.eigenvectors;
    auto g = vecs.adjoint() * rho_ * vecs;
    const std::size_t n = g.rows();
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l)
        g(k, l) *= -log_divided_difference(es.eigenvalues[k], es.eigenvalues[l]) / std::log(2.0);
    return hermitian_part(vecs * g * vecs.adjoint());
  }

 private:
  // (ln x - ln y) / (x - y), written via atanh for stability near x == y.
  static double log_divided_difference(double x, double y) {
    x = std::max(x, tol::log_clamp);
    y = std::max(y, tol::log_clamp);
    const double h = (x - y) / (x + y);
    const double ratio = std::abs(h) < 1e-8 ? 1.0 + h * h / 3.0 : std::atanh(h) / h;
    return 2.0 * ratio / (x + y);
  }

  ComplexMatrix rho_;
  std::size_t da_;
  std::size_t db_;
  double neg_entropy_;
};

// Local operator (I (x) <b|) G (I (x) |b>) or (<a| (x) I) G (|a> (x) I).
ComplexMatrix contract(const ComplexMatrix& g, const ComplexVector& fixed, std::size_t da, std::size_t db, Side keep) {
  if (keep == Side::A) {
    ComplexMatrix out(da, da);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j) {
        Complex s{};
        for (std::size_t k = 0; k < db; ++k)
          for (std::size_t l = 0; l < db; ++l) s += std::conj(fixed[k]) * g(i * db + k, j * db + l) * fixed[l];
        out(i, j) = s;
      }
    return out;
  }
  ComplexMatrix out(db, db);
  for (std::size_t i = 0; i < db; ++i)
    for (std::size_t j = 0; j < db; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < da; ++k)
        for (std::size_t l = 0; l < da; ++l) s += std::conj(fixed[k]) * g(k * db + i, l * db + j) * fixed[l];
      out(i, j) = s;
    }
  return out;
}

ComplexVector min_eigenvector(const ComplexMatrix& h) {
  const auto es = hermitian_eig(hermitian_part(h));
  return es.eigenvectors.col(h.rows() - 1);
}

// Approximate argmin of <a b|G|a b> over product unit vectors.
Atom linear_oracle(const ComplexMatrix& g, const std::vector<Atom>& atoms, std::size_t da, std::size_t db, Rng& rng) {
  std::vector<std::pair<ComplexVector, ComplexVector>> starts;
  if (!atoms.empty()) {
    const auto best = std::min_element(atoms.begin(), atoms.end(), [&](const Atom& x, const Atom& y) {
      return quadratic_form(g, x.v) < quadratic_form(g, y.v);
    });
    starts.emplace_back(best->a, best->b);
  }
  for (std::size_t s = 0; s < kOracleRandomStarts; ++s)
    starts.emplace_back(random_unit_vector(da, rng), random_unit_vector(db, rng));

  Atom best_atom{};
  double best_value = kInf;
  for (auto& [a, b] : starts) {
    double prev = kInf;
    for (int sweep = 0; sweep < kOracleSweeps; ++sweep) {
      a = min_eigenvector(contract(g, b, da, db, Side::A));
      b = min_eigenvector(contract(g, a, da, db, Side::B));
      const double val = quadratic_form(g, tensor(a, b));
      if (prev - val < 1e-15) break;
      prev = val;
    }
    auto atom = make_atom(0.0, a, b);
    const double val = quadratic_form(g, atom.v);
    if (val < best_value) {
      best_value = val;
      best_atom = std::move(atom);
    }
  }
  return best_atom;
}

template <class F>
std::pair<double, double> golden_section(F&& f, double hi) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < kGoldenIterations; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

ComplexMatrix assemble(const std::vector<Atom>& atoms, std::size_t n) {
  ComplexMatrix sigma(n, n);
  for (const auto& atom : atoms) add_outer(sigma, atom.v, atom.weight);
  return sigma;
}

void normalize(std::vector<Atom>& atoms) {
  std::erase_if(atoms, [](const Atom& x) { return x.weight <= kPruneWeight; });
  double total = 0.0;
  for (const auto& x : atoms) total += x.weight;
  for (auto& x : atoms) x.weight /= total;
}

struct RunResult {
  double value = kInf;
  std::vector<Atom> atoms;
  double gap = kInf;
};

// Moves every atom along the tangent descent direction of its local
// vectors, -(G_b a - <a|G_b|a> a) and likewise for b, with a shared step size.
bool refine_atoms(const Problem& prob, std::vector<Atom>& atoms, const ComplexMatrix& g, double& value,
                  HermitianEigenSystem& es) {
  const std::size_t da = prob.dim_a(), db = prob.dim_b(), n = prob.dim();
  std::vector<ComplexVector> dir_a(atoms.size()), dir_b(atoms.size());
  double largest = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto ga = contract(g, atoms[i].b, da, db, Side::A) * atoms[i].a;
    const auto gb = contract(g, atoms[i].a, da, db, Side::B) * atoms[i].b;
    const Complex ea = inner(atoms[i].a, ga), eb = inner(atoms[i].b, gb);
    dir_a[i].resize(da);
    dir_b[i].resize(db);
    for (std::size_t k = 0; k < da; ++k) dir_a[i][k] = -(ga[k] - ea * atoms[i].a[k]);
    for (std::size_t k = 0; k < db; ++k) dir_b[i][k] = -(gb[k] - eb * atoms[i].b[k]);
    largest = std::max({largest, norm(dir_a[i]), norm(dir_b[i])});
  }
  if (largest < 1e-14) return false;

  auto moved = [&](double t) {
    auto out = atoms;
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t k = 0; k < da; ++k) out[i].a[k] += t * dir_a[i][k];
      for (std::size_t k = 0; k < db; ++k) out[i].b[k] += t * dir_b[i][k];
      const double na = norm(out[i].a), nb = norm(out[i].b);
      for (auto& x : out[i].a) x /= na;
      for (auto& x : out[i].b) x /= nb;
      out[i].v = tensor(out[i].a, out[i].b);
    }
    return out;
  };
  const auto [t, trial_value] =
      golden_section([&](double step) { return prob.value(assemble(moved(step), n)); }, 1.0 / largest);
  if (!(trial_value < value)) return false;
  atoms = moved(t);
  value = prob.value(assemble(atoms, n), &es);
  return true;
}

RunResult frank_wolfe(const Problem& prob, std::vector<Atom> atoms, std::size_t iterations, Rng& rng) {
  const std::size_t n = prob.dim();
  const std::size_t cap = n * n;
  normalize(atoms);
  auto sigma = assemble(atoms, n);
  HermitianEigenSystem es;
  double value = prob.value(sigma, &es);
  RunResult best{value, atoms, kInf};
  if (!std::isfinite(value)) return best;

  int stalled = 0;
  for (std::size_t it = 0; it < iterations && stalled < 3; ++it) {
    const double start_value = value;
    const auto g = prob.gradient(es);
    auto s = linear_oracle(g, atoms, prob.dim_a(), prob.dim_b(), rng);
    const double gs = quadratic_form(g, s.v);
    std::vector<double> atom_grad(atoms.size());
    double inner_sigma = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      atom_grad[i] = quadratic_form(g, atoms[i].v);
      inner_sigma += atoms[i].weight * atom_grad[i];
    }
    const double gap = inner_sigma - gs;
    best.gap = std::min(best.gap, gap);
    if (gap < 1e-9) break;

    ComplexMatrix ss(n, n);
    add_outer(ss, s.v, 1.0);

    // Plain Frank-Wolfe step towards s.
    auto fw_point = [&](double gamma) { return sigma * Complex(1.0 - gamma) + ss * Complex(gamma); };
    const auto [fw_gamma, fw_value] = golden_section([&](double t) { return prob.value(fw_point(t)); }, 1.0);

    // Pairwise step moving weight from the worst atom to s.
    const std::size_t away = static_cast<std::size_t>(
        std::max_element(atom_grad.begin(), atom_grad.end()) - atom_grad.begin());
    ComplexMatrix dir = ss;
    add_outer(dir, atoms[away].v, -1.0);
    const double wmax = atoms[away].weight;
    auto pw_point = [&](double gamma) { return sigma + dir * Complex(gamma); };
    const auto [pw_gamma, pw_value] = golden_section([&](double t) { return prob.value(pw_point(t)); }, wmax);

    const double new_value = std::min(fw_value, pw_value);
    if (!(new_value < value)) {
      ++stalled;
      continue;
    }

    if (pw_value <= fw_value) {
      atoms[away].weight -= pw_gamma;
      s.weight = pw_gamma;
    } else {
      for (auto& x : atoms) x.weight *= 1.0 - fw_gamma;
      s.weight = fw_gamma;
    }
    bool merged = false;
    for (auto& x : atoms)
      if (std::norm(inner(x.v, s.v)) > 1.0 - 1e-13) {
        x.weight += s.weight;
        merged = true;
        break;
      }
    if (!merged) atoms.push_back(std::move(s));
    if (atoms.size() > cap) {
      const auto smallest = std::min_element(atoms.begin(), atoms.end(),
                                             [](const Atom& x, const Atom& y) { return x.weight < y.weight; });
      atoms.erase(smallest);
    }
    normalize(atoms);
    sigma = assemble(atoms, n);
    value = prob.value(sigma, &es);
    if (!std::isfinite(value)) break;

    // Exponentiated-gradient correction of the weights.
    {
      const auto g2 = prob.gradient(es);
      std::vector<double> grad(atoms.size());
      double mean = 0.0;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        grad[i] = quadratic_form(g2, atoms[i].v);
        mean += atoms[i].weight * grad[i];
      }
      double spread = 0.0;
      for (double x : grad) spread = std::max(spread, std::abs(x - mean));
      if (spread > 0.0) {
        for (double eta = 1.0 / spread; eta > 1e-4 / spread; eta *= 0.25) {
          auto trial = atoms;
          for (std::size_t i = 0; i < trial.size(); ++i) trial[i].weight *= std::exp(-eta * (grad[i] - mean));
          normalize(trial);
          HermitianEigenSystem trial_es;
          const auto trial_sigma = assemble(trial, n);
          const double trial_value = prob.value(trial_sigma, &trial_es);
          if (trial_value < value) {
            atoms = std::move(trial);
            sigma = trial_sigma;
            es = std::move(trial_es);
            value = trial_value;
            break;
          }
        }
      }
    }

    refine_atoms(prob, atoms, prob.gradient(es), value, es);
    sigma = assemble(atoms, n);
    stalled = start_value - value < 1e-10 ? stalled + 1 : 0;

    if (value < best.value) {
      best.value = value;
      best.atoms = atoms;
    }
  }
  return best;
}

std::vector<Atom> schmidt_dephased_start(const DensityOperator& rho) {
  std::vector<Atom> atoms;
  const auto es = hermitian_eig(rho.matrix());
  for (std::size_t k = 0; k < es.eigenvalues.size(); ++k) {
    const double lambda = es.eigenvalues[k];
    if (lambda <= tol::log_clamp) continue;
    auto v = es.eigenvectors.col(k);
    const double nv = norm(v);
    for (auto& x : v) x /= nv;
    const auto sd = schmidt(PureBipartiteState(v, rho.dim_a(), rho.dim_b()));
    for (std::size_t m = 0; m < sd.coefficients.size(); ++m)
      if (sd.coefficients[m] > 0.0) atoms.push_back(make_atom(lambda * sd.coefficients[m], sd.basis_a.col(m), sd.basis_b.col(m)));
  }
  return atoms;
}

std::vector<Atom> marginal_product_start(const DensityOperator& rho) {
  const auto ea = hermitian_eig(rho.reduced(Side::A));
  const auto eb = hermitian_eig(rho.reduced(Side::B));
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < ea.eigenvalues.size(); ++i)
    for (std::size_t j = 0; j < eb.eigenvalues.size(); ++j) {
      const double w = ea.eigenvalues[i] * eb.eigenvalues[j];
      if (w > kPruneWeight) atoms.push_back(make_atom(w, ea.eigenvectors.col(i), eb.eigenvectors.col(j)));
    }
  return atoms;
}

std::vector<Atom> random_start(std::size_t da, std::size_t db, Rng& rng) {
  const std::size_t count = da * db;
  const auto w = random_simplex_point(count, rng);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < count; ++i)
    atoms.push_back(make_atom(w[i], random_unit_vector(da, rng), random_unit_vector(db, rng)));
  return atoms;
}

std::vector<Atom> from_witness(const SeparableWitness& w) {
  std::vector<Atom> atoms;
  for (const auto& x : w.atoms) {
    const double na = norm(x.a), nb = norm(x.b);
    if (na <= 0.0 || nb <= 0.0 || x.weight <= 0.0) continue;
    ComplexVector a = x.a, b = x.b;
    for (auto& c : a) c /= na;
    for (auto& c : b) c /= nb;
    atoms.push_back(make_atom(x.weight * na * na * nb * nb, std::move(a), std::move(b)));
  }
  return atoms;
}

}  // namespace

ErResult relative_entropy_entanglement(const DensityOperator& rho, const OptimizerBudget& budget,
                                       std::span<const SeparableWitness> warm_starts) {
  const Problem prob(rho);
  const std::size_t seeded = std::max<std::size_t>(budget.restarts, 1);
  for (const auto& w : warm_starts)
    if (w.dim_a != rho.dim_a() || w.dim_b != rho.dim_b())
      throw DimensionError("relative_entropy_entanglement: warm start dimensions differ");
  const std::size_t jobs = seeded + warm_starts.size();
  std::vector<RunResult> results(jobs);

  auto run = [&](std::size_t job) {
    Rng rng(derive_seed(budget.seed, job));
    std::vector<Atom> start;
    if (job >= seeded) start = from_witness(warm_starts[job - seeded]);
    else if (job == 0) start = schmidt_dephased_start(rho);
    else if (job == 1) start = marginal_product_start(rho);
    else start = random_start(rho.dim_a(), rho.dim_b(), rng);
    if (start.empty()) return;
    results[job] = frank_wolfe(prob, std::move(start), budget.iterations, rng);
  };

  kernels::run_jobs(jobs, budget.execution, run);

  std::size_t best = 0;
  for (std::size_t j = 1; j < jobs; ++j)
    if (results[j].value < results[best].value) best = j;

  ErResult out;
  out.report = {"er", results[best].value, ReportKind::upper_bound,
                OptimizerInfo{seeded, budget.iterations, budget.seed}};
  out.gap = results[best].gap;
  out.witness = {rho.dim_a(), rho.dim_b(), {}};
  for (const auto& a : results[best].atoms) out.witness.atoms.push_back({a.weight, a.a, a.b});
  return out;
}

}  // namespace entkit
