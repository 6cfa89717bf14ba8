#pragma once

// JSON forms of states, channels, protocols and reports.
//
// Numbers are written with 17 significant digits so doubles survive a round
// trip, complex entries as [re, im] pairs and matrices as arrays of rows.
// Objects keep their insertion order. Structural problems in the input
// raise ParseError; a well-formed document describing an invalid state
// raises the state's own InvariantError or DimensionError.

#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "entkit/asymptotics.hpp"
#include "entkit/channels.hpp"
#include "entkit/measures.hpp"
#include "entkit/nielsen.hpp"
#include "entkit/states.hpp"
#include "entkit/verify.hpp"

namespace entkit::io {

using Json = nlohmann::ordered_json;

Json parse(std::string_view text);
/// Pretty-printed with two-space indentation and a trailing newline.
/// Non-finite numbers are written as null.
std::string dump(const Json& value);

Json to_json(Complex z);
Json to_json(const ComplexMatrix& m);
Json to_json(const ProbVector& p);

using State = std::variant<PureBipartiteState, DensityOperator>;

/// {"dimA", "dimB", "kind": "pure" | "density", "data"}; pure data is the
/// amplitude list in the A-major composite order, density data the matrix.
Json to_json(const PureBipartiteState& psi);
Json to_json(const DensityOperator& rho);
State state_from_json(const Json& j);

/// {"dimIn": [a, b], "dimOut": [a, b], "kraus": [matrix, ...]}; a plain
/// integer dimension d means {d, 1}.
Json to_json(const KrausChannel& channel);
KrausChannel channel_from_json(const Json& j);

/// {"source", "target", "steps": [{"j", "k", "result", "c_scale", "d_scale",
/// "C", "D", "U", "V"}]}. When reading, "j", "k" and "result" are optional;
/// the scales are required because they fix the operators outside the
/// protocol's M-dimensional block.
Json to_json(const NielsenProtocol& proto);
NielsenProtocol protocol_from_json(const Json& j);

Json to_json(const MeasureReport& report);

Json to_json(const TypicalSet& typ, bool with_classes);
/// Rows without a distillation or cost dimension carry null rates.
Json to_json(const UniquenessReport& report);

Json to_json(const AxiomCheckResult& result);
Json to_json(const SuiteReport& report);

}  // namespace entkit::io
