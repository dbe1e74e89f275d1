#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "contactq/symbol.hpp"

namespace contactq {

/// Multi-index of basis one-forms dx^{i1} ^ ... ^ dx^{ik}, strictly increasing.
using FormIndex = std::vector<int>;

/// Homogeneous exterior form with Symbol coefficients over a registry.
class DifferentialForm {
 public:
  DifferentialForm(RegistryPtr registry, int degree);

  /// 0-form.
  static DifferentialForm scalar(const Symbol& s);
  /// d(var).
  static DifferentialForm basis(RegistryPtr registry, std::string_view var);

  const Registry& registry() const { return *registry_; }
  const RegistryPtr& registry_ptr() const { return registry_; }
  int degree() const { return degree_; }
  const std::map<FormIndex, Symbol>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Coefficient of an arbitrary (unsorted) index tuple, antisymmetry applied.
  Symbol coefficient(FormIndex idx) const;
  void add_term(FormIndex idx, const Symbol& c);

  DifferentialForm& operator+=(const DifferentialForm& o);
  DifferentialForm& operator-=(const DifferentialForm& o);
  friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) { return a += b; }
  friend DifferentialForm operator-(DifferentialForm a, const DifferentialForm& b) { return a -= b; }
  DifferentialForm operator-() const;
  friend DifferentialForm operator*(const Symbol& f, const DifferentialForm& a);

  friend bool operator==(const DifferentialForm& a, const DifferentialForm& b);

 private:
  void check_same(const DifferentialForm& o) const;

  RegistryPtr registry_;
  int degree_;
  std::map<FormIndex, Symbol> terms_;
};

/// Vector field: one Symbol component per registry slot.
using VectorComponents = std::vector<Symbol>;

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm exterior_derivative(const DifferentialForm& a);
/// Contraction into the first slot.
DifferentialForm interior(std::span<const Symbol> v, const DifferentialForm& a);
/// Cartan: L_V = i_V d + d i_V.
DifferentialForm lie_derivative(std::span<const Symbol> v, const DifferentialForm& a);
/// Componentwise commutator [V, W]^k = V(W^k) - W(V^k).
VectorComponents commutator(std::span<const Symbol> v, std::span<const Symbol> w);
/// V(f) = V^k d_k f.
Symbol apply_vector(std::span<const Symbol> v, const Symbol& f);

std::string to_string(const DifferentialForm& a);

}  // namespace contactq
