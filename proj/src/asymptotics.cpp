#include "entkit/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "entkit/error.hpp"
#include "entkit/tolerances.hpp"

namespace entkit {

namespace {

constexpr double kMembershipGuard = 1e-12;
constexpr std::size_t kMaterializeCap = 4096;
constexpr std::uint64_t kSpectrumCap = 1'000'000;

// x = mantissa * 2^exponent exactly.
struct Dyadic {
  BigInt mantissa;
  int exponent = 0;
};

Dyadic to_dyadic(double x) {
  int e = 0;
  const double m = std::frexp(x, &e);
  return {BigInt(static_cast<std::int64_t>(std::ldexp(m, 53))), e - 53};
}

Rational rational_from_double(double x) {
  const auto d = to_dyadic(x);
  if (d.exponent >= 0) return Rational(d.mantissa << d.exponent);
  return Rational(d.mantissa, BigInt(1) << -d.exponent);
}

// Saturating integer power, used only to compare against caps.
std::uint64_t checked_power(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > cap / base) return cap + 1;
    out *= base;
  }
  return out;
}

BigInt factorial(std::size_t n) {
  BigInt out = 1;
  for (std::size_t k = 2; k <= n; ++k) out *= k;
  return out;
}

// Shared description of the single-copy spectrum in exact form.
struct ExactSpectrum {
  std::vector<double> log2q;
  std::vector<BigInt> mantissa;
  std::vector<int> shift;  // exponent minus the smallest exponent, >= 0
  int min_exponent = 0;

  explicit ExactSpectrum(std::span<const double> q) {
    std::vector<Dyadic> parts;
    for (double x : q) {
      log2q.push_back(std::log2(x));
      parts.push_back(to_dyadic(x));
    }
    min_exponent = std::min_element(parts.begin(), parts.end(), [](const Dyadic& a, const Dyadic& b) {
                     return a.exponent < b.exponent;
                   })->exponent;
    for (auto& p : parts) {
      mantissa.push_back(p.mantissa);
      shift.push_back(p.exponent - min_exponent);
    }
  }

  // Mass of the given total in units of 2^{n * min_exponent}.
  Rational to_probability(const BigInt& numerator, std::size_t n) const {
    return Rational(numerator, BigInt(1) << static_cast<unsigned>(-min_exponent * static_cast<int>(n)));
  }

  double class_log2(const std::vector<std::size_t>& counts) const {
    double l = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) l += static_cast<double>(counts[j]) * log2q[j];
    return l;
  }
};

struct Window {
  double lo;
  double hi;
  bool contains(double log2p) const { return log2p >= lo && log2p <= hi; }
};

void compositions(std::size_t n, std::size_t parts, std::vector<std::size_t>& cur,
                  const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (cur.size() + 1 == parts) {
    cur.push_back(n);
    visit(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t k = n + 1; k-- > 0;) {
    cur.push_back(k);
    compositions(n - k, parts, cur, visit);
    cur.pop_back();
  }
}

struct Tally {
  BigInt mass;
  BigInt size;
  std::map<std::vector<std::size_t>, BigInt> classes;
};

void by_type_class(const ExactSpectrum& ex, std::size_t n, const Window& w, Tally& out) {
  const std::size_t d = ex.log2q.size();
  const BigInt nfact = factorial(n);
  std::vector<std::size_t> cur;
  compositions(n, d, cur, [&](const std::vector<std::size_t>& counts) {
    if (!w.contains(ex.class_log2(counts))) return;
    BigInt mult = nfact;
    BigInt term = 1;
    unsigned shift = 0;
    for (std::size_t j = 0; j < d; ++j) {
      mult /= factorial(counts[j]);
      term *= boost::multiprecision::pow(ex.mantissa[j], static_cast<unsigned>(counts[j]));
      shift += static_cast<unsigned>(counts[j]) * static_cast<unsigned>(ex.shift[j]);
    }
    out.mass += mult * (term << shift);
    out.size += mult;
    out.classes[counts] = mult;
  });
}

// Depth-first walk over index sequences below a fixed prefix. Each level
// carries the running mantissa product, binary shift and log2 probability.
void visit_sequences(const ExactSpectrum& ex, std::size_t n, const Window& w, std::size_t pos, const BigInt& prod,
                     unsigned shift, double log2p, std::vector<std::size_t>& counts, Tally& out) {
  if (pos == n) {
    if (!w.contains(log2p)) return;
    out.mass += prod << shift;
    out.size += 1;
    out.classes[counts] += 1;
    return;
  }
  for (std::size_t s = 0; s < ex.log2q.size(); ++s) {
    ++counts[s];
    visit_sequences(ex, n, w, pos + 1, prod * ex.mantissa[s], shift + static_cast<unsigned>(ex.shift[s]),
                    log2p + ex.log2q[s], counts, out);
    --counts[s];
  }
}

void by_enumeration(const ExactSpectrum& ex, std::size_t n, const Window& w, kernels::Execution execution,
                    Tally& out) {
  const std::size_t d = ex.log2q.size();
  std::size_t prefix_len = 0;
  std::size_t chunks = 1;
  while (prefix_len < n && chunks < 64) {
    chunks *= d;
    ++prefix_len;
  }
  std::vector<Tally> partial(chunks);
  kernels::run_jobs(chunks, execution, [&](std::size_t c) {
    std::vector<std::size_t> counts(d, 0);
    BigInt prod = 1;
    unsigned shift = 0;
    double log2p = 0.0;
    std::size_t rest = c;
    std::vector<std::size_t> digits(prefix_len);
    for (std::size_t i = prefix_len; i-- > 0;) {
      digits[i] = rest % d;
      rest /= d;
    }
    for (std::size_t s : digits) {
      ++counts[s];
      prod *= ex.mantissa[s];
      shift += static_cast<unsigned>(ex.shift[s]);
      log2p += ex.log2q[s];
    }
    visit_sequences(ex, n, w, prefix_len, prod, shift, log2p, counts, partial[c]);
  });
  for (auto& t : partial) {
    out.mass += t.mass;
    out.size += t.size;
    for (auto& [k, v] : t.classes) out.classes[k] += v;
  }
}

std::vector<double> product_spectrum(std::span<const double> q, std::size_t n) {
  std::vector<double> out{1.0};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> next;
    next.reserve(out.size() * q.size());
    for (double a : out)
      for (double b : q) next.push_back(a * b);
    out = std::move(next);
  }
  return out;
}

ProbVector positive_spectrum(const PureBipartiteState& psi) { return schmidt(psi).spectrum().trimmed(); }

void check_epsilon(double entropy, double epsilon) {
  if (!(epsilon > 0.0) || epsilon >= std::min(entropy / 2.0, 0.5))
    throw PreconditionError("dilution_dims: need 0 < eps < min(S/2, 1/2)");
}

std::optional<DilutionDims> try_dilution_dims(double p, double entropy, std::size_t n, double epsilon) {
  check_epsilon(entropy, epsilon);
  if (!(p >= 0.0) || p > 1.0 + tol::trace) throw PreconditionError("dilution_dims: p must lie in [0, 1]");
  const double nd = static_cast<double>(n);
  if (nd * (entropy + epsilon) > 62.0) throw CapExceededError("dilution_dims: dimensions exceed 2^62");
  DilutionDims out;
  out.distill = static_cast<std::uint64_t>(std::floor(p * std::exp2(nd * (entropy - epsilon))));
  out.cost = static_cast<std::uint64_t>(std::ceil(p * std::exp2(nd * (entropy + epsilon))));
  if (out.distill == 0) return std::nullopt;
  return out;
}

}  // namespace

std::string to_string(TypicalMode mode) {
  switch (mode) {
    case TypicalMode::automatic: return "automatic";
    case TypicalMode::type_class: return "type_class";
    case TypicalMode::exhaustive: return "exhaustive";
  }
  return "?";
}

double TypicalSet::total_probability() const { return probability.convert_to<double>(); }

double TypicalSet::log2_size() const {
  if (size == 0) return -std::numeric_limits<double>::infinity();
  return std::log2(size.convert_to<double>());
}

bool TypicalSet::meets_mass_bound() const { return probability >= Rational(1) - rational_from_double(epsilon); }

bool TypicalSet::contains(const std::vector<std::size_t>& counts) const {
  const auto it = std::lower_bound(classes.begin(), classes.end(), counts,
                                   [](const TypeClass& c, const std::vector<std::size_t>& k) { return c.counts < k; });
  return it != classes.end() && it->counts == counts;
}

TypicalSet typical_set(const ProbVector& q, std::size_t n, double epsilon, const TypicalOptions& options) {
  if (!(epsilon > 0.0)) throw PreconditionError("typical_set: eps must be positive");
  if (n == 0) throw PreconditionError("typical_set: need at least one copy");
  TypicalSet out;
  out.spectrum = q.trimmed();
  out.copies = n;
  out.epsilon = epsilon;
  out.entropy = shannon_entropy(out.spectrum.values());
  if (!(out.entropy > 0.0)) throw PreconditionError("typical_set: spectrum has zero entropy");

  const std::size_t d = out.spectrum.size();
  const bool fits = checked_power(d, n, options.enumeration_cap) <= options.enumeration_cap;
  out.mode = options.mode;
  if (out.mode == TypicalMode::automatic) out.mode = fits ? TypicalMode::exhaustive : TypicalMode::type_class;
  if (out.mode == TypicalMode::exhaustive && !fits)
    throw CapExceededError("typical_set: d^n exceeds the enumeration cap; use type-class mode");

  const ExactSpectrum ex(out.spectrum.values());
  const double nd = static_cast<double>(n);
  const Window w{-nd * (out.entropy + epsilon) - kMembershipGuard, -nd * (out.entropy - epsilon) + kMembershipGuard};
  Tally tally;
  if (out.mode == TypicalMode::exhaustive)
    by_enumeration(ex, n, w, options.execution, tally);
  else
    by_type_class(ex, n, w, tally);

  out.probability = ex.to_probability(tally.mass, n);
  out.size = tally.size;
  for (auto& [counts, mult] : tally.classes) out.classes.push_back({counts, mult, ex.class_log2(counts)});
  return out;
}

ProbVector interpolating_spectrum(const TypicalSet& typ) {
  if (typ.size > kMaterializeCap) throw CapExceededError("interpolating_spectrum: more than 4096 members");
  if (typ.size == 0) throw PreconditionError("interpolating_spectrum: empty typical set");
  const double p = typ.total_probability();
  std::vector<double> values;
  for (const auto& c : typ.classes) {
    double pi = 1.0;
    for (std::size_t j = 0; j < c.counts.size(); ++j)
      pi *= std::pow(typ.spectrum[j], static_cast<double>(c.counts[j]));
    values.insert(values.end(), c.multiplicity.convert_to<std::size_t>(), pi / p);
  }
  return ProbVector::from_unsorted(std::move(values));
}

PureBipartiteState interpolating_state(const PureBipartiteState& psi, const TypicalSet& typ,
                                       InterpolationOptions options) {
  const std::size_t n = typ.copies;
  if (checked_power(psi.dim_a() * psi.dim_b(), n, kMaterializeCap) > kMaterializeCap)
    throw CapExceededError("interpolating_state: (dimA dimB)^n exceeds 4096");
  if (typ.size == 0) throw PreconditionError("interpolating_state: empty typical set");

  const auto sd = schmidt(psi);
  const auto q = sd.spectrum().trimmed();
  if (q.size() != typ.spectrum.size()) throw SpectrumMismatchError("interpolating_state: Schmidt rank differs");
  for (std::size_t j = 0; j < q.size(); ++j)
    if (std::abs(q[j] - typ.spectrum[j]) > 1e-12)
      throw SpectrumMismatchError("interpolating_state: typical set was built from another spectrum");

  const std::size_t rank = q.size();
  ComplexMatrix ea(psi.dim_a(), rank), eb(psi.dim_b(), rank);
  for (std::size_t k = 0; k < rank; ++k) {
    for (std::size_t i = 0; i < psi.dim_a(); ++i) ea(i, k) = sd.basis_a(i, k);
    for (std::size_t i = 0; i < psi.dim_b(); ++i) eb(i, k) = sd.basis_b(i, k);
  }
  ComplexMatrix big_a = ComplexMatrix::identity(1), big_b = ComplexMatrix::identity(1);
  for (std::size_t k = 0; k < n; ++k) {
    big_a = tensor(big_a, ea);
    big_b = tensor(big_b, eb);
  }

  const double scale = options.drop_normalization ? 1.0 : 1.0 / std::sqrt(typ.total_probability());
  const std::size_t terms = big_a.cols();
  std::vector<double> coeff(terms, 0.0);
  std::vector<std::size_t> counts(rank);
  for (std::size_t i = 0; i < terms; ++i) {
    std::fill(counts.begin(), counts.end(), 0);
    double pi = 1.0;
    for (std::size_t rest = i, k = 0; k < n; ++k, rest /= rank) {
      ++counts[rest % rank];
      pi *= q[rest % rank];
    }
    if (typ.contains(counts)) coeff[i] = std::sqrt(pi) * scale;
  }

  const std::size_t da = big_a.rows(), db = big_b.rows();
  ComplexVector amp(da * db);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b) {
      Complex s{};
      for (std::size_t i = 0; i < terms; ++i)
        if (coeff[i] != 0.0) s += coeff[i] * big_a(a, i) * big_b(b, i);
      amp[a * db + b] = s;
    }
  return PureBipartiteState(std::move(amp), da, db);
}

double DilutionDims::log2_distill_rate(std::size_t n) const {
  return std::log2(static_cast<double>(distill)) / static_cast<double>(n);
}

double DilutionDims::log2_cost_rate(std::size_t n) const {
  return std::log2(static_cast<double>(cost)) / static_cast<double>(n);
}

DilutionDims dilution_dims(double p, double entropy, std::size_t n, double epsilon) {
  auto dims = try_dilution_dims(p, entropy, n, epsilon);
  if (!dims) throw PreconditionError("dilution_dims: n too small, distillation dimension is zero");
  return *dims;
}

NielsenProtocol concentrate_protocol(const PureBipartiteState& psi, std::size_t n, double epsilon) {
  const auto typ = typical_set(positive_spectrum(psi), n, epsilon);
  if (typ.size > kProtocolLengthCap) throw CapExceededError("concentrate_protocol: typical set exceeds 64 terms");
  const auto dims = dilution_dims(typ.total_probability(), typ.entropy, n, epsilon);
  return synthesize(interpolating_spectrum(typ), ProbVector::uniform(dims.distill));
}

NielsenProtocol dilute_protocol(const PureBipartiteState& psi, std::size_t n, double epsilon) {
  const auto typ = typical_set(positive_spectrum(psi), n, epsilon);
  const auto dims = dilution_dims(typ.total_probability(), typ.entropy, n, epsilon);
  if (dims.cost > kProtocolLengthCap) throw CapExceededError("dilute_protocol: cost dimension exceeds 64");
  return synthesize(ProbVector::uniform(dims.cost), interpolating_spectrum(typ));
}

RegularizationTrace regularize(const std::function<double(std::size_t)>& f, std::size_t n_max, bool subadditive,
                               double tolerance, kernels::Execution execution) {
  if (n_max == 0) throw PreconditionError("regularize: n_max must be at least 1");
  std::vector<double> raw(n_max);
  kernels::run_jobs(n_max, execution, [&](std::size_t j) { raw[j] = f(j + 1); });

  RegularizationTrace out;
  double inf = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n_max; ++j) {
    const double per = raw[j] / static_cast<double>(j + 1);
    inf = std::min(inf, per);
    out.values.push_back({j + 1, per, inf});
  }
  if (subadditive) {
    out.is_subadditive_certified = true;
    for (std::size_t m = 1; m < n_max; ++m)
      for (std::size_t k = 1; m + k <= n_max; ++k)
        if (raw[m + k - 1] > raw[m - 1] + raw[k - 1] + tolerance) out.is_subadditive_certified = false;
    out.limit_estimate = inf;
  } else {
    out.limit_estimate = out.values.back().per_copy;
  }
  return out;
}

BinomialAverageTrace binomial_average_check(const std::function<double(std::size_t)>& g, double limit, double x1,
                                            std::size_t n_max) {
  if (!(x1 >= 0.0 && x1 <= 1.0)) throw PreconditionError("binomial_average_check: x1 must lie in [0, 1]");
  BinomialAverageTrace out{x1, x1 * limit, {}};
  std::vector<double> gk(n_max + 1, 0.0);
  for (std::size_t k = 1; k <= n_max; ++k) gk[k] = g(k);
  const double x2 = 1.0 - x1;
  for (std::size_t n = 1; n <= n_max; ++n) {
    double sum = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      double w;
      if (x1 == 1.0) {
        w = k == n ? 1.0 : 0.0;
      } else if (x1 == 0.0) {
        w = 0.0;
      } else {
        const double nk = static_cast<double>(n), kk = static_cast<double>(k);
        w = std::exp(std::lgamma(nk + 1) - std::lgamma(kk + 1) - std::lgamma(nk - kk + 1) + kk * std::log(x1) +
                     (nk - kk) * std::log(x2));
      }
      sum += w * static_cast<double>(k) * gk[k];
    }
    out.values.push_back(sum / static_cast<double>(n));
  }
  return out;
}

UniquenessReport uniqueness_experiment(const PureBipartiteState& psi, PureMeasure measure, std::size_t n_max,
                                       const std::function<double(std::size_t)>& epsilon_schedule) {
  UniquenessReport out;
  out.psi_spectrum = positive_spectrum(psi);
  out.measure = measure;
  out.svn = shannon_entropy(out.psi_spectrum.values());
  if (checked_power(out.psi_spectrum.size(), n_max, kSpectrumCap) > kSpectrumCap)
    throw CapExceededError("uniqueness_experiment: rank^n_max exceeds 10^6");

  for (std::size_t n = 1; n <= n_max; ++n) {
    UniquenessRow row;
    row.n = n;
    row.epsilon = epsilon_schedule(n);
    const auto spec = ProbVector::from_unsorted(product_spectrum(out.psi_spectrum.values(), n));
    row.value_per_n = evaluate(measure, spec) / static_cast<double>(n);
    row.gap_to_svn = row.value_per_n - out.svn;
    const auto typ = typical_set(out.psi_spectrum, n, row.epsilon);
    row.p = typ.total_probability();
    row.typ_size = typ.size;
    if (const auto dims = try_dilution_dims(row.p, typ.entropy, n, row.epsilon)) {
      row.log2a_over_n = dims->log2_distill_rate(n);
      row.log2b_over_n = dims->log2_cost_rate(n);
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

RenyiCounterexample renyi_counterexample(std::size_t n) {
  if (n == 0 || n > 10) throw PreconditionError("renyi_counterexample: n must lie in 1..10");
  const std::size_t full = std::size_t{1} << (2 * n);
  const std::size_t half = std::size_t{1} << n;
  const double small = 1.0 / static_cast<double>(full);

  RenyiCounterexample out;
  out.n = n;
  std::vector<double> near(full - half + 1, small);
  near[0] = 1.0 / static_cast<double>(half);
  out.near = ProbVector(std::move(near));
  out.uniform = ProbVector::uniform(full);
  out.sinf_near = evaluate(PureMeasure::sinf, out.near);
  out.sinf_uniform = evaluate(PureMeasure::sinf, out.uniform);

  double overlap = 0.0, dist2 = 0.0;
  for (std::size_t i = 0; i < full; ++i) {
    const double x = std::sqrt(out.near.at_or_zero(i)), y = std::sqrt(out.uniform[i]);
    overlap += x * y;
    dist2 += (x - y) * (x - y);
  }
  out.overlap = overlap;
  const double one_minus = dist2 / 2.0;
  out.trace_distance = 2.0 * std::sqrt(one_minus * (2.0 - one_minus));
  return out;
}

}  // namespace entkit
