#include "contactq/io.hpp"

#include <cmath>
#include <limits>

#include "contactq/errors.hpp"

namespace contactq {

using nlohmann::json;

namespace {

json integer_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

mpz_class integer_from_json(const json& j) {
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  if (j.is_string()) {
    mpz_class z;
    if (z.set_str(j.get<std::string>(), 10) != 0) throw InputError("malformed integer string");
    return z;
  }
  throw InputError("expected an integer");
}

json rational_json(const mpq_class& q) { return json::array({integer_json(q.get_num()), integer_json(q.get_den())}); }

mpq_class rational_pair(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InputError("rational must be [num, den]");
  mpz_class den = integer_from_json(j[1]);
  if (den == 0) throw InputError("zero denominator");
  mpq_class q(integer_from_json(j[0]), den);
  q.canonicalize();
  return q;
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw InputError("unknown key '" + k + "'");
  }
}

}  // namespace

json symbol_to_json(const Symbol& s) {
  json terms = json::array();
  for (const auto& [e, c] : s.terms())
    terms.push_back({{"exp", e}, {"re", rational_json(c.re())}, {"im", rational_json(c.im())}});
  return {{"vars", s.registry().names()}, {"terms", terms}};
}

Symbol symbol_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vars") || !j.contains("terms")) throw InputError("symbol needs vars and terms");
  reject_unknown(j, {"vars", "terms"});
  auto reg = make_registry(j.at("vars").get<std::vector<std::string>>());
  Symbol s(reg);
  for (const auto& t : j.at("terms")) {
    reject_unknown(t, {"exp", "re", "im"});
    auto e = t.at("exp").get<Exponents>();
    if (e.size() != reg->size()) throw InputError("exponent vector length does not match vars");
    s.add_term(e, GaussianRational(rational_pair(t.at("re")), t.contains("im") ? rational_pair(t.at("im")) : mpq_class(0)));
  }
  return s;
}

mpq_class rational_from_json(const json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (j.is_number_float()) {
    double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError("non-finite number");
    return mpq_class(v);
  }
  if (j.is_string()) {
    mpq_class q;
    if (q.set_str(j.get<std::string>(), 10) != 0) throw InputError("malformed rational '" + j.get<std::string>() + "'");
    if (q.get_den() == 0) throw InputError("zero denominator");
    q.canonicalize();
    return q;
  }
  throw InputError("expected a rational");
}

json fock_to_json(const FockOp& op) {
  json entries = json::array();
  for (const auto& [r, c, v] : op.entries()) entries.push_back({r, c, v.real(), v.imag()});
  return {{"dim", op.dimension()}, {"entries", entries}};
}

json harmonic_to_json(const HarmonicExpansion& h) {
  json out = json::object();
  for (const auto& [d, c] : h.components()) out[std::to_string(d)] = symbol_to_json(c);
  return out;
}

AmbientStructure structure_from_json(const json& j) {
  if (!j.is_object()) throw InputError("structure must be a JSON object");
  reject_unknown(j, {"n", "omega", "frequencies"});
  if (j.contains("frequencies") == j.contains("omega"))
    throw InputError("structure needs exactly one of omega or frequencies");
  AmbientStructure s = [&] {
    if (j.contains("frequencies")) {
      std::vector<mpq_class> f;
      for (const auto& v : j.at("frequencies")) f.push_back(rational_from_json(v));
      return AmbientStructure::from_frequencies(f);
    }
    AmbientStructure::Matrix w;
    for (const auto& row : j.at("omega")) {
      w.emplace_back();
      for (const auto& v : row) w.back().push_back(rational_from_json(v));
    }
    return AmbientStructure(std::move(w));
  }();
  if (j.contains("n") && j.at("n").get<int>() != s.n())
    throw StructureMismatch("n does not match the size of the structure");
  return s;
}

}  // namespace contactq
