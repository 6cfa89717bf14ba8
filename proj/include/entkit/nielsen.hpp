#pragma once

// Explicit LQCC protocols for pure-state conversion under majorization.
//
// A protocol is a sequence of two-outcome steps in the abstract Schmidt
// index space {0..M-1}. Step k turns the canonical state sum sqrt(p_m)|mm>
// into sum sqrt(r_m)|mm> via the instrument {C (x) U, D (x) V}: Alice
// measures, Bob applies U or V depending on the outcome.

#include <cstddef>
#include <vector>

#include "entkit/channels.hpp"
#include "entkit/majorization.hpp"
#include "entkit/states.hpp"

namespace entkit {

struct NielsenStep {
  std::size_t j = 0;  // 0-based pivot indices, j < k
  std::size_t k = 0;
  ProbVector source;
  ProbVector result;
  ComplexMatrix c;  // M x M Alice operators
  ComplexMatrix d;
  ComplexMatrix u;  // M x M Bob unitaries
  ComplexMatrix v;
  double c_scale = 0.0;  // prefactors of C and D
  double d_scale = 0.0;
};

struct NielsenProtocol {
  ProbVector source;  // both padded to the same length M
  ProbVector target;
  std::vector<NielsenStep> steps;  // in application order

  std::size_t length() const noexcept { return source.size(); }
};

/// Test hooks that deliberately break the construction.
struct SynthesisOptions {
  bool drop_d_prefactor = false;
};

/// Builds the protocol p -> q. Throws NotConvertibleError carrying the first
/// violated partial sum when q does not majorize p. The result is not
/// self-validated, so a broken mutation surfaces only when it is applied.
NielsenProtocol synthesize(const ProbVector& p, const ProbVector& q, SynthesisOptions options = {});

/// || C^dagger C + D^dagger D - I ||_F
double step_completeness_defect(const NielsenStep& step);
bool step_operators_unitary(const NielsenStep& step, double tol);

/// Step operators embedded into the full local spaces through the given
/// Schmidt bases (columns beyond M are completed with the scaled identity).
SeparableChannel step_channel(const NielsenStep& step, const ComplexMatrix& basis_a, const ComplexMatrix& basis_b);

/// One-way LQCC form of the step in the abstract index space.
OneWayLqccChannel step_as_one_way(const NielsenStep& step);

/// Runs the protocol on psi in psi's own Schmidt bases. Throws
/// SpectrumMismatchError when psi's spectrum differs from proto.source by
/// more than 1e-8.
DensityOperator apply_protocol(const NielsenProtocol& proto, const PureBipartiteState& psi);

/// sum sqrt(q_m) |a_m>|b_m> in psi's Schmidt bases.
PureBipartiteState protocol_target(const NielsenProtocol& proto, const PureBipartiteState& psi);

/// Protocol psi -> phi. The extra local unitary mapping psi's Schmidt bases
/// to phi's is returned alongside.
struct Conversion {
  NielsenProtocol protocol;
  ComplexMatrix alice_unitary;
  ComplexMatrix bob_unitary;
};
Conversion plan_conversion(const PureBipartiteState& psi, const PureBipartiteState& phi);
DensityOperator run_conversion(const Conversion& conversion, const PureBipartiteState& psi);

/// Majorization test on the Schmidt spectra.
bool convertible(const PureBipartiteState& psi, const PureBipartiteState& phi);

/// The whole protocol as one Kraus channel in the abstract index space,
/// acting on M x M. Operator count is 2^steps.
KrausChannel protocol_channel(const NielsenProtocol& proto);

}  // namespace entkit
