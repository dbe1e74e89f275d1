#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "contactq/forms.hpp"
#include "contactq/symbol.hpp"

namespace contactq {

/// Names used for the canonical coordinates of an n-pair chart: "u" and
/// "q", "p" when n == 1, "q1".."qn", "p1".."pn" otherwise.
std::string q_name(int n, int i);
std::string p_name(int n, int i);

/// Coordinates (u, q^1..q^n, p_1..p_n) plus optional constant parameters and
/// a contact form over them. Slot layout: u = 0, q^i = 1 + i, p_i = 1 + n + i,
/// parameters after.
class ContactChart {
 public:
  /// Darboux chart, alpha = du - sum p_i dq^i.
  explicit ContactChart(int n, std::vector<std::string> parameters = {});
  /// Arbitrary form over a registry laid out as above. Throws NotContact when
  /// alpha ^ (d alpha)^n vanishes identically.
  ContactChart(RegistryPtr registry, int n, DifferentialForm alpha);

  int n() const { return n_; }
  const RegistryPtr& registry() const { return registry_; }
  const DifferentialForm& alpha() const { return alpha_; }
  bool is_darboux() const { return darboux_; }
  std::size_t dimension() const { return static_cast<std::size_t>(2 * n_ + 1); }

  std::size_t u_slot() const { return 0; }
  std::size_t q_slot(int i) const { return static_cast<std::size_t>(1 + i); }
  std::size_t p_slot(int i) const { return static_cast<std::size_t>(1 + n_ + i); }

  Symbol u() const;
  Symbol q(int i) const;
  Symbol p(int i) const;
  Symbol one() const;
  Symbol zero() const { return Symbol(registry_); }

  /// Parses over the chart registry.
  Symbol parse(std::string_view text) const;
  /// Re-expresses a symbol over the chart registry; rejects w and hbar.
  Symbol adopt(const Symbol& s) const;

  /// alpha ^ (d alpha)^n as a top form.
  DifferentialForm volume_form() const;

 private:
  int n_;
  RegistryPtr registry_;
  DifferentialForm alpha_;
  bool darboux_ = true;
};

/// Components (V^u, V^{q^i}, V^{p_i}) padded with zeros for parameter slots.
struct ContactVectorField {
  VectorComponents components;

  const Symbol& u() const { return components[0]; }
  friend bool operator==(const ContactVectorField& a, const ContactVectorField& b) {
    return a.components == b.components;
  }
};

/// V_F on a Darboux chart: V^u = p F_p - F, V^q = F_p, V^p = -F_q - p F_u.
ContactVectorField contact_vector_field(const Symbol& f, const ContactChart& chart);

/// g with L_V alpha = g alpha, or nullopt if V does not preserve the contact
/// structure.
std::optional<Symbol> conformal_factor(const ContactVectorField& v, const ContactChart& chart);

/// -i_V alpha. Throws NotContact when V is not a contact vector field.
Symbol hamiltonian_of(const ContactVectorField& v, const ContactChart& chart);

/// Closed form (F,G) = F_u G - F G_u + p(F_p G_u - F_u G_p) + F_p G_q - F_q G_p,
/// defined so that [V_F, V_G] = V_{(F,G)}.
Symbol lagrange_bracket(const Symbol& f, const Symbol& g, const ContactChart& chart);

/// -i_{[V_F, V_G]} alpha computed from the vector-field commutator.
Symbol lagrange_bracket_oracle(const Symbol& f, const Symbol& g, const ContactChart& chart);

/// (F,GH) - (F,G)H - G(F,H) - (1,F)GH; identically zero.
Symbol generalized_leibniz_defect(const Symbol& f, const Symbol& g, const Symbol& h, const ContactChart& chart);

/// One row of the canonical commutation table on R^3 (n = 1). The constant
/// function is reported under the name "w".
struct CommutationEntry {
  std::string left, right;
  Symbol computed;         // closed-form bracket
  Symbol oracle;           // vector-field commutator
  std::string published;   // value printed in the literature table
  bool matches_published;
};

std::vector<CommutationEntry> commutation_table(const ContactChart& chart);

}  // namespace contactq
