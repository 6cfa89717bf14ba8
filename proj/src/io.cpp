#include "entkit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "entkit/error.hpp"

namespace entkit::io {
namespace {

void write(std::string& out, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
  const std::string close(static_cast<std::size_t>(depth) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::null:
    case Json::value_t::discarded:
      out += "null";
      return;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      return;
    }
    case Json::value_t::string:
    case Json::value_t::binary:
      out += j.dump();
      return;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Vectors and matrix rows stay on one line; they are the bulk of the output.
      auto scalar_or_pair = [](const Json& x) {
        return !x.is_structured() || (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number());
      };
      const bool flat = std::all_of(j.begin(), j.end(), scalar_or_pair);
      out += '[';
      bool first = true;
      for (const auto& x : j) {
        if (!first) out += ',';
        first = false;
        if (flat) {
          if (out.back() == ',') out += ' ';
        } else {
          out += '\n';
          out += pad;
        }
        write(out, x, depth + 1);
      }
      if (!flat) {
        out += '\n';
        out += close;
      }
      out += ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += ": ";
        write(out, it.value(), depth + 1);
      }
      out += '\n';
      out += close;
      out += '}';
      return;
    }
  }
}

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) fail("expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) fail(std::string(what) + ": expected a number");
  return j.get<double>();
}

std::size_t count(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() <= 0) fail(std::string(what) + ": expected a positive integer");
  return static_cast<std::size_t>(j.get<std::int64_t>());
}

std::size_t index(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) fail(std::string(what) + ": expected a nonnegative integer");
  return static_cast<std::size_t>(j.get<std::int64_t>());
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) fail("complex entry: expected [re, im]");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail("matrix: expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) fail("matrix: rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) fail("matrix: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

std::vector<double> doubles(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + ": expected an array");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number(x, what));
  return out;
}

Dims dims_from_json(const Json& j, const char* what) {
  if (j.is_number_integer()) return {count(j, what), 1};
  if (j.is_array() && j.size() == 2) return {count(j[0], what), count(j[1], what)};
  fail(std::string(what) + ": expected an integer or [a, b]");
}

Json dims_json(Dims d) { return Json::array({d.a, d.b}); }

Json big(const BigInt& n) {
  if (n <= std::numeric_limits<std::uint64_t>::max()) return n.convert_to<std::uint64_t>();
  return n.str();
}

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

}  // namespace

Json parse(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

std::string dump(const Json& value) {
  std::string out;
  write(out, value, 0);
  out += '\n';
  return out;
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const ProbVector& p) {
  Json out = Json::array();
  for (double x : p.values()) out.push_back(x);
  return out;
}

Json to_json(const PureBipartiteState& psi) {
  Json data = Json::array();
  for (const auto& z : psi.amplitudes()) data.push_back(to_json(z));
  return {{"dimA", psi.dim_a()}, {"dimB", psi.dim_b()}, {"kind", "pure"}, {"data", std::move(data)}};
}

Json to_json(const DensityOperator& rho) {
  return {{"dimA", rho.dim_a()}, {"dimB", rho.dim_b()}, {"kind", "density"}, {"data", to_json(rho.matrix())}};
}

State state_from_json(const Json& j) {
  const std::size_t da = count(field(j, "dimA"), "dimA");
  const std::size_t db = count(field(j, "dimB"), "dimB");
  const auto& kind = field(j, "kind");
  if (!kind.is_string()) fail("kind: expected a string");
  const auto& data = field(j, "data");
  if (kind == "pure") {
    if (!data.is_array()) fail("data: expected an amplitude array");
    ComplexVector amp;
    for (const auto& z : data) amp.push_back(complex_from_json(z));
    if (amp.size() != da * db) fail("data: expected dimA * dimB amplitudes");
    return PureBipartiteState(std::move(amp), da, db);
  }
  if (kind == "density") {
    auto m = matrix_from_json(data);
    if (m.rows() != da * db || m.cols() != da * db) fail("data: expected a (dimA dimB) square matrix");
    return DensityOperator(std::move(m), da, db);
  }
  fail("kind: expected \"pure\" or \"density\"");
}

Json to_json(const KrausChannel& channel) {
  Json ops = Json::array();
  for (const auto& k : channel.ops()) ops.push_back(to_json(k));
  return {{"dimIn", dims_json(channel.in())}, {"dimOut", dims_json(channel.out())}, {"kraus", std::move(ops)}};
}

KrausChannel channel_from_json(const Json& j) {
  const Dims in = dims_from_json(field(j, "dimIn"), "dimIn");
  const Dims out = dims_from_json(field(j, "dimOut"), "dimOut");
  const auto& kraus = field(j, "kraus");
  if (!kraus.is_array() || kraus.empty()) fail("kraus: expected a non-empty array of matrices");
  std::vector<ComplexMatrix> ops;
  for (const auto& k : kraus) ops.push_back(matrix_from_json(k));
  return KrausChannel(std::move(ops), in, out);
}

Json to_json(const NielsenProtocol& proto) {
  Json steps = Json::array();
  for (const auto& s : proto.steps)
    steps.push_back({{"j", s.j},
                     {"k", s.k},
                     {"result", to_json(s.result)},
                     {"c_scale", s.c_scale},
                     {"d_scale", s.d_scale},
                     {"C", to_json(s.c)},
                     {"D", to_json(s.d)},
                     {"U", to_json(s.u)},
                     {"V", to_json(s.v)}});
  return {{"source", to_json(proto.source)}, {"target", to_json(proto.target)}, {"steps", std::move(steps)}};
}

NielsenProtocol protocol_from_json(const Json& j) {
  NielsenProtocol proto;
  proto.source = ProbVector(doubles(field(j, "source"), "source"));
  proto.target = ProbVector(doubles(field(j, "target"), "target"));
  if (proto.source.size() != proto.target.size()) fail("source and target must have the same length");
  const std::size_t m = proto.source.size();
  const auto& steps = field(j, "steps");
  if (!steps.is_array()) fail("steps: expected an array");
  ProbVector current = proto.source;
  for (const auto& s : steps) {
    NielsenStep step;
    step.source = current;
    step.c = matrix_from_json(field(s, "C"));
    step.d = matrix_from_json(field(s, "D"));
    step.u = matrix_from_json(field(s, "U"));
    step.v = matrix_from_json(field(s, "V"));
    for (const auto* op : {&step.c, &step.d, &step.u, &step.v})
      if (op->rows() != m || op->cols() != m) fail("step operators must be M x M");
    step.j = s.contains("j") ? index(s["j"], "j") : 0;
    step.k = s.contains("k") ? index(s["k"], "k") : 0;
    step.result = s.contains("result") ? ProbVector(doubles(field(s, "result"), "result")) : proto.target;
    step.c_scale = number(field(s, "c_scale"), "c_scale");
    step.d_scale = number(field(s, "d_scale"), "d_scale");
    current = step.result;
    proto.steps.push_back(std::move(step));
  }
  return proto;
}

Json to_json(const MeasureReport& report) {
  Json out{{"measure", report.measure}, {"value", report.value}, {"kind", std::string(to_string(report.kind))}};
  if (report.optimizer)
    out["optimizer"] = {{"restarts", report.optimizer->restarts},
                        {"iterations", report.optimizer->iterations},
                        {"seed", report.optimizer->seed}};
  else
    out["optimizer"] = nullptr;
  return out;
}

Json to_json(const TypicalSet& typ, bool with_classes) {
  Json out{{"n", typ.copies},
           {"mode", to_string(typ.mode)},
           {"p", typ.total_probability()},
           {"p_exact", typ.probability.str()},
           {"typ_size", big(typ.size)},
           {"log2_size", typ.size == 0 ? Json(nullptr) : Json(typ.log2_size())},
           {"meets_mass_bound", typ.meets_mass_bound()}};
  if (with_classes) {
    Json classes = Json::array();
    for (const auto& c : typ.classes)
      classes.push_back({{"counts", c.counts}, {"multiplicity", big(c.multiplicity)},
                         {"log2_probability", c.log2_probability}});
    out["classes"] = std::move(classes);
  }
  return out;
}

Json to_json(const UniquenessReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"n", r.n},
                    {"epsilon", r.epsilon},
                    {"value_per_n", r.value_per_n},
                    {"gap_to_svn", r.gap_to_svn},
                    {"log2a_over_n", optional_number(r.log2a_over_n)},
                    {"log2b_over_n", optional_number(r.log2b_over_n)},
                    {"p", r.p},
                    {"typ_size", big(r.typ_size)}});
  return {{"psi_spectrum", to_json(report.psi_spectrum)},
          {"measure", std::string(to_string(report.measure))},
          {"rows", std::move(rows)},
          {"S_vN", report.svn}};
}

Json to_json(const AxiomCheckResult& result) {
  Json witnesses = Json::array();
  for (const auto& w : result.witnesses)
    witnesses.push_back({{"seed", w.seed}, {"inputs", w.inputs}, {"lhs", w.lhs}, {"rhs", w.rhs}});
  Json out{{"check", result.axiom},
           {"measure", result.measure},
           {"outcome", std::string(to_string(result.outcome))},
           {"samples", result.samples},
           {"tolerance", result.tolerance},
           {"witnesses", std::move(witnesses)}};
  if (!result.note.empty()) out["note"] = result.note;
  return out;
}

Json to_json(const SuiteReport& report) {
  Json entries = Json::array();
  std::size_t unmet = 0;
  for (const auto& e : report.entries) {
    Json j = to_json(e.result);
    j["expected"] = std::string(to_string(e.expected));
    j["met"] = e.met();
    unmet += e.met() ? 0 : 1;
    entries.push_back(std::move(j));
  }
  return {{"suite", report.suite},
          {"seed", report.seed},
          {"mutation", std::string(to_string(report.mutation))},
          {"passed", report.passed()},
          {"unmet", unmet},
          {"entries", std::move(entries)}};
}

}  // namespace entkit::io
