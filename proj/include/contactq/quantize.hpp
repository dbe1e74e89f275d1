#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "contactq/contact.hpp"
#include "contactq/symbol.hpp"

namespace contactq {

/// Three registries tied to one contact chart:
///   base       (u, q.., p.., params)          contact functions
///   restricted (u, q.., p.., hbar, params)    quantum symbols seen at w = 1
///   lifted     (w, u, q.., k.., hbar, params) symbols on the symplectization, k = w p
class QuantumChart {
 public:
  explicit QuantumChart(int n, std::vector<std::string> parameters = {});

  int n() const { return chart_.n(); }
  const ContactChart& contact() const { return chart_; }
  const RegistryPtr& restricted() const { return restricted_; }
  const RegistryPtr& lifted() const { return lifted_; }

  std::size_t w_slot() const { return 0; }
  std::size_t u_slot() const { return 1; }
  std::size_t q_slot(int i) const { return static_cast<std::size_t>(2 + i); }
  std::size_t k_slot(int i) const { return static_cast<std::size_t>(2 + n() + i); }
  std::size_t hbar_slot() const { return static_cast<std::size_t>(2 + 2 * n()); }

  /// Parses over the restricted registry (u, q, p, hbar, params).
  Symbol parse(std::string_view text) const;
  /// Parses over the lifted registry.
  Symbol parse_lifted(std::string_view text) const;

 private:
  ContactChart chart_;
  RegistryPtr restricted_;
  RegistryPtr lifted_;
};

/// u^a q^b p^c -> w^(1-|c|) u^a q^b k^c. Accepts symbols over the base or
/// restricted registry; hbar and parameters pass through. Throws ForeignVariable.
Symbol lift(const Symbol& f, const QuantumChart& qc);

/// w = 1, k = p. Not a homomorphism for the star product.
Symbol restrict_w1(const Symbol& a, const QuantumChart& qc);

/// Canonical Poisson bracket on the lifted space:
///   {A,B} = A_u B_w - A_w B_u + sum_i (A_k B_q - A_q B_k).
Symbol lifted_poisson(const Symbol& a, const Symbol& b, const QuantumChart& qc);

/// Exact Moyal product with pairs (u,w) and (k_i,q_i):
///   A * B = AB - (i hbar / 2){A,B} + O(hbar^2).
/// The series terminates on u-, k- and q-degrees, so negative powers of w are fine.
Symbol moyal(const Symbol& a, const Symbol& b, const QuantumChart& qc);

/// restrict_w1(lift F * lift G) for symbols over the restricted registry.
Symbol restricted_star(const Symbol& f, const Symbol& g, const QuantumChart& qc);

/// Coefficient of hbar^k (as a symbol without hbar).
Symbol hbar_coefficient(const Symbol& s, int k, const QuantumChart& qc);

// ---- wave operators --------------------------------------------------------

/// Finite sum of c(u, q) d_u^a d_q1^b1 ... d_qn^bn, coefficients on the left.
/// Coefficients live in the restricted registry and must not involve p.
class WaveOperator {
 public:
  using Orders = std::vector<int>;  // (a, b1..bn)
  using Terms = std::map<Orders, Symbol>;

  explicit WaveOperator(const QuantumChart& qc);

  const Terms& terms() const { return terms_; }
  int n() const { return n_; }
  const RegistryPtr& registry() const { return registry_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Orders& d, const Symbol& coeff);
  /// Highest total derivative order.
  int order() const;

  /// Applies to a function of (u, q) given as a restricted-registry symbol.
  Symbol apply(const Symbol& f) const;

  WaveOperator& operator+=(const WaveOperator& o);
  friend WaveOperator operator+(WaveOperator a, const WaveOperator& b) { return a += b; }
  friend WaveOperator operator-(const WaveOperator& a, const WaveOperator& b);
  friend bool operator==(const WaveOperator& a, const WaveOperator& b) { return a.terms_ == b.terms_; }

 private:
  friend WaveOperator compose(const WaveOperator& a, const WaveOperator& b);
  friend WaveOperator adjoint(const WaveOperator& a);

  int n_;
  RegistryPtr registry_;
  std::vector<std::size_t> slots_;  // u, q1..qn in the restricted registry
  Terms terms_;
};

WaveOperator compose(const WaveOperator& a, const WaveOperator& b);
/// Formal L2 adjoint with u, q and hbar real.
WaveOperator adjoint(const WaveOperator& a);
std::string to_string(const WaveOperator& op);

enum class Ordering {
  Weyl,         // midpoint ordering of the lift; fails on p-degree >= 2
  ProductForm,  // F(u, q, (-i hbar)^2 d_q d_u) (-i hbar d_u), coefficients left
};

/// Operator of F with w -> -i hbar d_u and k -> -i hbar d_q. Throws
/// LaurentObstruction for Weyl ordering when a monomial has p-degree >= 2.
WaveOperator weyl_operator(const Symbol& f, const QuantumChart& qc, Ordering ordering = Ordering::Weyl);

/// F(q, -i hbar d_q) acting on phi(q), obtained from the product form on
/// exp(i u / hbar) phi(q). Throws DependsOnU.
WaveOperator schrodinger_reduce(const Symbol& f, const QuantumChart& qc);

// ---- numerics --------------------------------------------------------------

struct EikonalGrid {
  double a = 0, b = 1;
  int points = 201;
};

/// Relative L2 residual of the product-form operator of F (n = 1) applied to
/// exp((i/hbar)(u + chi(q))). The u dependence is exact; q derivatives use
/// high-order finite differences. Coefficients depending on u are evaluated on
/// the slice u = chi(q). Throws NotOnShell if |F(chi, q, chi')| > 1e-10.
double eikonal_residual(const Symbol& f, const QuantumChart& qc, const std::function<double(double)>& chi,
                        const std::function<double(double)>& dchi, double hbar, const EikonalGrid& grid,
                        const std::map<std::string, double>& bindings = {});

/// Weights for the m-th derivative at x0 from the given nodes (Fornberg).
std::vector<double> finite_difference_weights(int m, double x0, const std::vector<double>& nodes);

/// Lowest `count` eigenvalues of a reduced operator a d_q^2 + V(q) (a real
/// negative constant) with Dirichlet ends, N interior points. hbar and
/// parameters are bound from `bindings` (missing parameters default to 0).
/// Throws NonHermitianDiscretization.
std::vector<double> grid_eigensolve(const WaveOperator& op, double a, double b, int N, int count,
                                    const std::map<std::string, double>& bindings);

}  // namespace contactq
