#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "contactq/gaussian.hpp"

namespace contactq {

/// Name of the single variable allowed to carry negative exponents.
inline constexpr std::string_view kLaurentVariable = "w";
/// Name of the formal deformation parameter.
inline constexpr std::string_view kHbar = "hbar";

/// Ordered list of variable names. Shared immutably between symbols.
class Registry {
 public:
  explicit Registry(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t slot) const { return names_.at(slot); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws UnknownVariable.
  std::size_t slot(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name).has_value(); }
  std::optional<std::size_t> laurent_slot() const { return find(kLaurentVariable); }

  friend bool operator==(const Registry& a, const Registry& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
};

using RegistryPtr = std::shared_ptr<const Registry>;
RegistryPtr make_registry(std::vector<std::string> names);
bool same_registry(const RegistryPtr& a, const RegistryPtr& b);

using Exponents = std::vector<int>;

/// Exact Laurent polynomial (Laurent only in w) with Gaussian-rational
/// coefficients. Canonical: no zero coefficients, one entry per exponent vector.
class Symbol {
 public:
  using Terms = std::map<Exponents, GaussianRational>;

  explicit Symbol(RegistryPtr registry);
  Symbol(RegistryPtr registry, const GaussianRational& c);

  static Symbol constant(RegistryPtr registry, const GaussianRational& c) { return {std::move(registry), c}; }
  static Symbol variable(RegistryPtr registry, std::string_view name, int power = 1);
  static Symbol monomial(RegistryPtr registry, Exponents exps, const GaussianRational& c);

  const Registry& registry() const { return *registry_; }
  const RegistryPtr& registry_ptr() const { return registry_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Coefficient of the constant monomial.
  GaussianRational constant_term() const;
  GaussianRational coefficient(const Exponents& e) const;
  bool is_real() const;

  /// Adds c * x^e, keeping canonical form.
  void add_term(const Exponents& e, const GaussianRational& c);

  int max_degree(std::size_t slot) const;
  int min_degree(std::size_t slot) const;
  int total_degree() const;
  bool depends_on(std::size_t slot) const;
  bool depends_on(std::string_view name) const;

  Symbol& operator+=(const Symbol& o);
  Symbol& operator-=(const Symbol& o);
  Symbol& operator*=(const Symbol& o);
  Symbol& operator*=(const GaussianRational& c);

  friend Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
  friend Symbol operator-(Symbol a, const Symbol& b) { return a -= b; }
  friend Symbol operator*(const Symbol& a, const Symbol& b);
  friend Symbol operator*(Symbol a, const GaussianRational& c) { return a *= c; }
  friend Symbol operator*(const GaussianRational& c, Symbol a) { return a *= c; }
  Symbol operator-() const;

  friend bool operator==(const Symbol& a, const Symbol& b);
  friend bool operator!=(const Symbol& a, const Symbol& b) { return !(a == b); }

  Symbol pow(unsigned k) const;
  Symbol conj() const;

 private:
  void check_same(const Symbol& o) const;

  RegistryPtr registry_;
  Terms terms_;
};

/// Formal partial derivative. Throws UnknownVariable.
Symbol differentiate(const Symbol& s, std::string_view var);
Symbol differentiate(const Symbol& s, std::size_t slot);

/// Re-expresses s over another registry by name. Throws ForeignVariable when a
/// variable that s depends on is missing from the target.
Symbol embed(const Symbol& s, const RegistryPtr& target);

/// Substitutes a constant for one variable.
Symbol substitute(const Symbol& s, std::size_t slot, const GaussianRational& value);

/// Substitutes a polynomial for one variable. The variable must not appear
/// with negative exponents.
Symbol substitute(const Symbol& s, std::size_t slot, const Symbol& value);

/// Numeric evaluation; values are indexed by registry slot.
std::complex<double> evaluate(const Symbol& s, std::span<const double> values);

/// Canonical text form; re-parses to the same Symbol.
std::string to_string(const Symbol& s);

/// Monomial-wise coefficient conversion to doubles for fast evaluation.
/// Throws DomainError if any coefficient is non-real.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Symbol& s);

  double operator()(std::span<const double> values) const;
  std::size_t arity() const { return arity_; }

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<std::size_t, int>> powers;
  };
  std::vector<Term> terms_;
  std::size_t arity_ = 0;
};

}  // namespace contactq
