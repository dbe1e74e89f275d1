#include "contactq/symbol.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

#include "contactq/errors.hpp"

namespace contactq {

std::string to_string(const mpq_class& q) { return q.get_str(); }

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

Registry::Registry(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!valid_identifier(n)) throw Error("invalid variable name '" + n + "'");
    if (n == "i") throw Error("'i' is reserved for the imaginary unit");
    if (!seen.insert(n).second) throw Error("duplicate variable name '" + n + "'");
  }
}

std::optional<std::size_t> Registry::find(std::string_view name) const {
  for (std::size_t k = 0; k < names_.size(); ++k)
    if (names_[k] == name) return k;
  return std::nullopt;
}

std::size_t Registry::slot(std::string_view name) const {
  if (auto s = find(name)) return *s;
  throw UnknownVariable("unknown variable '" + std::string(name) + "'");
}

RegistryPtr make_registry(std::vector<std::string> names) {
  return std::make_shared<const Registry>(std::move(names));
}

bool same_registry(const RegistryPtr& a, const RegistryPtr& b) { return a == b || *a == *b; }

// ---------------------------------------------------------------------------

Symbol::Symbol(RegistryPtr registry) : registry_(std::move(registry)) {
  if (!registry_) throw Error("null registry");
}

Symbol::Symbol(RegistryPtr registry, const GaussianRational& c) : Symbol(std::move(registry)) {
  add_term(Exponents(registry_->size(), 0), c);
}

Symbol Symbol::variable(RegistryPtr registry, std::string_view name, int power) {
  Symbol s(std::move(registry));
  Exponents e(s.registry_->size(), 0);
  e[s.registry_->slot(name)] = power;
  s.add_term(e, GaussianRational(1));
  return s;
}

Symbol Symbol::monomial(RegistryPtr registry, Exponents exps, const GaussianRational& c) {
  Symbol s(std::move(registry));
  s.add_term(exps, c);
  return s;
}

void Symbol::add_term(const Exponents& e, const GaussianRational& c) {
  if (e.size() != registry_->size()) throw RegistryMismatch("exponent vector has wrong length");
  if (c.is_zero()) return;
  auto lslot = registry_->laurent_slot();
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] < 0 && (!lslot || *lslot != k))
      throw NegativeExponent("negative exponent on '" + registry_->name(k) + "'", 0);
  }
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool Symbol::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() != 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
}

GaussianRational Symbol::constant_term() const { return coefficient(Exponents(registry_->size(), 0)); }

GaussianRational Symbol::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? GaussianRational() : it->second;
}

bool Symbol::is_real() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.is_real(); });
}

int Symbol::max_degree(std::size_t slot) const {
  int d = 0;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    d = first ? e[slot] : std::max(d, e[slot]);
    first = false;
  }
  return d;
}

int Symbol::min_degree(std::size_t slot) const {
  int d = 0;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    d = first ? e[slot] : std::min(d, e[slot]);
    first = false;
  }
  return d;
}

int Symbol::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

bool Symbol::depends_on(std::size_t slot) const {
  return std::any_of(terms_.begin(), terms_.end(), [slot](const auto& t) { return t.first[slot] != 0; });
}

bool Symbol::depends_on(std::string_view name) const {
  auto s = registry_->find(name);
  return s && depends_on(*s);
}

void Symbol::check_same(const Symbol& o) const {
  if (!same_registry(registry_, o.registry_)) throw RegistryMismatch("symbols over different registries");
}

Symbol& Symbol::operator+=(const Symbol& o) {
  check_same(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Symbol& Symbol::operator-=(const Symbol& o) {
  check_same(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Symbol operator*(const Symbol& a, const Symbol& b) {
  a.check_same(b);
  Symbol r(a.registry_);
  Exponents e(a.registry_->size());
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Symbol& Symbol::operator*=(const Symbol& o) { return *this = *this * o; }

Symbol& Symbol::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Symbol Symbol::operator-() const {
  Symbol r(*this);
  for (auto& [e, v] : r.terms_) v = -v;
  return r;
}

bool operator==(const Symbol& a, const Symbol& b) {
  return same_registry(a.registry_, b.registry_) && a.terms_ == b.terms_;
}

Symbol Symbol::pow(unsigned k) const {
  Symbol result(registry_, GaussianRational(1));
  Symbol base(*this);
  while (k) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k) base = base * base;
  }
  return result;
}

Symbol Symbol::conj() const {
  Symbol r(registry_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, c.conj());
  return r;
}

// ---------------------------------------------------------------------------

Symbol differentiate(const Symbol& s, std::string_view var) {
  return differentiate(s, s.registry().slot(var));
}

Symbol differentiate(const Symbol& s, std::size_t slot) {
  Symbol r(s.registry_ptr());
  for (const auto& [e, c] : s.terms()) {
    if (e[slot] == 0) continue;
    Exponents d = e;
    d[slot] -= 1;
    r.add_term(d, c * GaussianRational(e[slot]));
  }
  return r;
}

Symbol embed(const Symbol& s, const RegistryPtr& target) {
  if (same_registry(s.registry_ptr(), target)) return Symbol(s);
  const auto& src = s.registry();
  std::vector<std::optional<std::size_t>> map(src.size());
  for (std::size_t k = 0; k < src.size(); ++k) map[k] = target->find(src.name(k));
  Symbol r(target);
  for (const auto& [e, c] : s.terms()) {
    Exponents t(target->size(), 0);
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      if (!map[k]) throw ForeignVariable("variable '" + src.name(k) + "' is not available here");
      t[*map[k]] = e[k];
    }
    r.add_term(t, c);
  }
  return r;
}

Symbol substitute(const Symbol& s, std::size_t slot, const GaussianRational& value) {
  Symbol r(s.registry_ptr());
  for (const auto& [e, c] : s.terms()) {
    Exponents t = e;
    t[slot] = 0;
    GaussianRational f(1);
    if (e[slot] >= 0) {
      for (int k = 0; k < e[slot]; ++k) f *= value;
    } else {
      if (value.is_zero()) throw DomainError("division by zero in substitution");
      for (int k = 0; k < -e[slot]; ++k) f /= value;
    }
    r.add_term(t, c * f);
  }
  return r;
}

Symbol substitute(const Symbol& s, std::size_t slot, const Symbol& value) {
  Symbol r(s.registry_ptr());
  std::map<int, Symbol> powers;
  for (const auto& [e, c] : s.terms()) {
    if (e[slot] < 0) throw DomainError("cannot substitute a polynomial for a negative power");
    auto it = powers.find(e[slot]);
    if (it == powers.end()) it = powers.emplace(e[slot], value.pow(static_cast<unsigned>(e[slot]))).first;
    Exponents t = e;
    t[slot] = 0;
    r += Symbol::monomial(s.registry_ptr(), t, c) * it->second;
  }
  return r;
}

std::complex<double> evaluate(const Symbol& s, std::span<const double> values) {
  if (values.size() != s.registry().size()) throw RegistryMismatch("evaluation point has wrong arity");
  std::complex<double> acc{0.0, 0.0};
  for (const auto& [e, c] : s.terms()) {
    double m = 1.0;
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e[k] != 0) m *= std::pow(values[k], e[k]);
    acc += c.to_complex() * m;
  }
  return acc;
}

// ---------------------------------------------------------------------------

namespace {

std::string monomial_text(const Registry& reg, const Exponents& e) {
  std::string out;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    if (!out.empty()) out += "*";
    out += reg.name(k);
    if (e[k] != 1) out += "^" + std::to_string(e[k]);
  }
  return out;
}

// Coefficient times monomial, sign included.
std::string term_text(const GaussianRational& c, const std::string& mono) {
  auto with = [&](const std::string& coeff) { return mono.empty() ? coeff : coeff + "*" + mono; };
  if (c.is_real()) {
    if (mono.empty()) return to_string(c.re());
    if (c.re() == 1) return mono;
    if (c.re() == -1) return "-" + mono;
    return with(to_string(c.re()));
  }
  if (sgn(c.re()) == 0) {
    const mpq_class& b = c.im();
    if (b == 1) return with("i");
    if (b == -1) return with("-i");
    return with(to_string(b) + "*i");
  }
  std::string im = sgn(c.im()) < 0 ? " - " + to_string(mpq_class(-c.im())) : " + " + to_string(c.im());
  return with("(" + to_string(c.re()) + im + "*i)");
}

}  // namespace

std::string to_string(const Symbol& s) {
  if (s.is_zero()) return "0";
  std::vector<std::pair<const Exponents*, const GaussianRational*>> order;
  for (const auto& [e, c] : s.terms()) order.emplace_back(&e, &c);
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    int da = std::accumulate(a.first->begin(), a.first->end(), 0);
    int db = std::accumulate(b.first->begin(), b.first->end(), 0);
    if (da != db) return da > db;
    return *a.first > *b.first;
  });
  std::string out;
  for (const auto& [e, c] : order) {
    std::string t = term_text(*c, monomial_text(s.registry(), *e));
    if (out.empty()) {
      out = t;
    } else if (t.front() == '-') {
      out += " - " + t.substr(1);
    } else {
      out += " + " + t;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

CompiledPolynomial::CompiledPolynomial(const Symbol& s) : arity_(s.registry().size()) {
  for (const auto& [e, c] : s.terms()) {
    if (!c.is_real()) throw DomainError("numeric evaluation requires real coefficients: " + to_string(s));
    Term t{c.re().get_d(), {}};
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e[k] != 0) t.powers.emplace_back(k, e[k]);
    terms_.push_back(std::move(t));
  }
}

double CompiledPolynomial::operator()(std::span<const double> values) const {
  double acc = 0.0;
  for (const auto& t : terms_) {
    double m = t.coeff;
    for (const auto& [slot, p] : t.powers) {
      double x = values[slot];
      if (p > 0) {
        for (int k = 0; k < p; ++k) m *= x;
      } else {
        for (int k = 0; k < -p; ++k) m /= x;
      }
    }
    acc += m;
  }
  return acc;
}

}  // namespace contactq
