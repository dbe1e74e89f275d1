#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "contactq/symbol.hpp"

namespace contactq {

/// Exact symplectic structure omega^{ij} on R^{2n} with derived normal form.
class AmbientStructure {
 public:
  using Matrix = std::vector<std::vector<mpq_class>>;

  /// Throws StructureMismatch unless omega is antisymmetric and invertible.
  explicit AmbientStructure(Matrix omega);
  /// Block-diagonal structure omega^{2a-1,2a} = omega_a / 2 so that the
  /// oscillator frequencies come out as omega_a.
  static AmbientStructure from_frequencies(const std::vector<mpq_class>& frequencies);

  int n() const { return n_; }
  int dimension() const { return 2 * n_; }
  const Matrix& omega() const { return omega_; }
  /// Registry x1..x2n.
  const RegistryPtr& registry() const { return registry_; }
  /// Registry z1..zn, zb1..zbn (z, zb when n = 1).
  const RegistryPtr& z_registry() const { return z_registry_; }

  /// omega_a = 2 lambda_a where +-i lambda_a are the eigenvalues of omega^{ij}.
  const std::vector<double>& frequencies() const { return frequencies_; }
  /// x_i = sum_a (to_z[i][a] z_a + to_z[i][n+a] zb_a).
  const std::vector<std::vector<std::complex<double>>>& to_z() const { return to_z_; }

  friend bool operator==(const AmbientStructure& a, const AmbientStructure& b) { return a.omega_ == b.omega_; }

 private:
  int n_;
  Matrix omega_;
  RegistryPtr registry_, z_registry_;
  std::vector<double> frequencies_;
  std::vector<std::vector<std::complex<double>>> to_z_;
};

/// Ambient bracket omega^{ij} d_i A d_j B.
Symbol ambient_poisson(const Symbol& a, const Symbol& b, const AmbientStructure& s);

/// Function on the unit sphere as a sum of homogeneous harmonic polynomials.
class HarmonicExpansion {
 public:
  explicit HarmonicExpansion(RegistryPtr x_registry);

  /// Sets the degree-d component; throws DomainError unless it is homogeneous
  /// of degree d and harmonic.
  void set_component(int d, const Symbol& h);
  /// F_{i1..id} x^{i1}..x^{id} / d! from a dense row-major tensor with m^d
  /// entries; throws DomainError unless symmetric and traceless.
  void set_tensor(int d, const std::vector<mpq_class>& entries);

  /// Harmonic representative of a polynomial restricted to x^2 = 1.
  static HarmonicExpansion reduce(const Symbol& p);

  const RegistryPtr& registry() const { return registry_; }
  const std::map<int, Symbol>& components() const { return components_; }
  Symbol component(int d) const;
  int max_degree() const { return components_.empty() ? -1 : components_.rbegin()->first; }
  bool is_zero() const { return components_.empty(); }
  /// Sum of the components.
  Symbol polynomial() const;

  HarmonicExpansion& operator+=(const HarmonicExpansion& o);
  friend HarmonicExpansion operator+(HarmonicExpansion a, const HarmonicExpansion& b) { return a += b; }
  friend HarmonicExpansion operator-(const HarmonicExpansion& a, const HarmonicExpansion& b);
  friend HarmonicExpansion operator*(const GaussianRational& c, HarmonicExpansion a);
  friend bool operator==(const HarmonicExpansion& a, const HarmonicExpansion& b) { return a.components_ == b.components_; }

 private:
  RegistryPtr registry_;
  std::map<int, Symbol> components_;
};

Symbol laplacian(const Symbol& p);

/// x^2 (F_0 + F_1 + F_2 + ...).
Symbol sphere_lift(const HarmonicExpansion& f);

/// {lift F, lift G} reduced to x^2 = 1. Throws StructureMismatch.
HarmonicExpansion sphere_bracket(const HarmonicExpansion& f, const HarmonicExpansion& g, const AmbientStructure& s);

/// Bracket of the degree-2 homogeneous extensions |x|^{2-d} F_d, i.e. the
/// contact bracket of the sphere. Differs from sphere_bracket by
/// D F . R G - D G . R F with D the harmonic degree and R = omega^{ij} x_i d_j.
HarmonicExpansion lagrange_sphere_bracket(const HarmonicExpansion& f, const HarmonicExpansion& g,
                                          const AmbientStructure& s);

// ---- Fock space ------------------------------------------------------------

/// Sparse operator on the truncated occupation basis {|N_1..N_n> : N_a <= N},
/// index = sum_a N_a (N+1)^(n-1-a).
class FockOp {
 public:
  using Entry = std::complex<double>;

  FockOp(int n, int cutoff);
  static FockOp identity(int n, int cutoff);

  int n() const { return n_; }
  int cutoff() const { return cutoff_; }
  long dimension() const { return dim_; }

  std::vector<int> occupation(long index) const;
  long index(const std::vector<int>& occupation) const;

  Entry at(long row, long col) const;
  void add(long row, long col, Entry v);
  /// Row-major list of stored non-zero entries.
  std::vector<std::tuple<long, long, Entry>> entries() const;
  std::size_t nonzeros() const;

  FockOp adjoint() const;
  bool is_hermitian() const;  // exact
  /// Largest singular value of the block with every N_a <= max_occupation.
  double interior_norm(int max_occupation) const;

  FockOp& operator+=(const FockOp& o);
  FockOp& operator-=(const FockOp& o);
  FockOp& operator*=(Entry c);
  friend FockOp operator+(FockOp a, const FockOp& b) { return a += b; }
  friend FockOp operator-(FockOp a, const FockOp& b) { return a -= b; }
  friend FockOp operator*(Entry c, FockOp a) { return a *= c; }
  friend FockOp operator*(const FockOp& a, const FockOp& b);
  friend bool operator==(const FockOp& a, const FockOp& b);

 private:
  void check_same(const FockOp& o) const;

  int n_, cutoff_;
  long dim_;
  std::vector<std::map<long, Entry>> rows_;
};

FockOp commutator(const FockOp& a, const FockOp& b);

/// Ladder letter: mode a, creation (A-dagger) or annihilation.
struct Ladder {
  int mode;
  bool creation;
};

/// Ordered product of ladder operators (leftmost acts last) with Bargmann
/// entries; each amplitude is the square root of an exact integer product.
FockOp fock_word(const std::vector<Ladder>& word, int n, int cutoff);

/// H = sum_a omega_a (A+_a A_a + 1/2), diagonal.
FockOp hamiltonian(const AmbientStructure& s, int cutoff);

/// [H, X] computed entrywise as sum_a omega_a (N_a(row) - N_a(col)) X.
FockOp hamiltonian_commutator(const AmbientStructure& s, const FockOp& x);

/// Polynomial in z, zb with floating complex coefficients.
using ZPolynomial = std::map<Exponents, std::complex<double>>;

ZPolynomial to_z(const Symbol& x_poly, const AmbientStructure& s);
ZPolynomial to_z_exact(const Symbol& z_poly);

/// z_a -> A+_a, zb_a -> A_a with full symmetrization over orderings. Monomials
/// are processed in conjugate pairs with averaged coefficients so a real
/// polynomial gives an exactly Hermitian matrix. Throws CutoffTooSmall when a
/// monomial degree exceeds 2N.
FockOp fock_quantize(const ZPolynomial& p, int n, int cutoff);
FockOp fock_quantize(const Symbol& z_poly, int cutoff);

/// F_0 H + sum_{d>=1} (H Phi_d + Phi_d H) / 2 with Phi_d = fock_quantize(F_d).
FockOp sphere_operator(const HarmonicExpansion& f, const AmbientStructure& s, int cutoff);

struct CommutatorReport {
  HarmonicExpansion bracket;
  /// Spectral norm of [F, G] - i Q(bracket) on the block with N_a <= N/2.
  double interior_defect = 0;
  /// Same over the whole truncated space, boundary artefacts included; NaN
  /// when the space has more than 2500 states.
  double full_defect = 0;
};

CommutatorReport commutator_report(const HarmonicExpansion& f, const HarmonicExpansion& g, const AmbientStructure& s,
                                   int cutoff);

}  // namespace contactq
