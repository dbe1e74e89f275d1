#pragma once

#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "contactq/contact.hpp"
#include "contactq/symbol.hpp"

namespace contactq {

struct ContactPoint {
  double u = 0.0;
  std::vector<double> q;
  std::vector<double> p;

  int n() const { return static_cast<int>(q.size()); }
  bool finite() const;
};

/// Value and first partials of a contact hamiltonian at a point.
struct HamiltonianJet {
  double value = 0.0;
  double du = 0.0;
  std::vector<double> dq;
  std::vector<double> dp;
};

class NumericHamiltonian {
 public:
  using Evaluator = std::function<HamiltonianJet(const ContactPoint&)>;

  NumericHamiltonian(int n, Evaluator eval) : n_(n), eval_(std::move(eval)) {}

  /// Compiles F and its partials. Parameters of the chart must be bound.
  static NumericHamiltonian from_symbol(const Symbol& f, const ContactChart& chart,
                                        const std::map<std::string, double>& bindings = {});

  /// F = g^{ij}(q) p_i p_j - k^2 with polynomial metric entries over q.
  static NumericHamiltonian eikonal(const ContactChart& chart, const std::vector<std::vector<Symbol>>& metric,
                                    double k);

  /// phi(F) with chain-rule partials.
  static NumericHamiltonian compose(std::function<double(double)> phi, std::function<double(double)> dphi,
                                    const NumericHamiltonian& f);

  int n() const { return n_; }
  HamiltonianJet operator()(const ContactPoint& x) const { return eval_(x); }

  /// Largest relative mismatch between analytic partials and central
  /// differences over the given points.
  double gradient_check(const std::vector<ContactPoint>& points, double h = 1e-6) const;

 private:
  int n_;
  Evaluator eval_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ContactPoint> states;
  std::vector<double> residuals;  // |F| at each sample

  const ContactPoint& back() const { return states.back(); }
  double max_residual() const;
};

/// Characteristic equations of F:
///   q' = F_p,  p' = -F_q - p F_u,  u' = p F_p - F.
ContactPoint characteristic_rate(const HamiltonianJet& j, const ContactPoint& x);

/// Fixed-step classical RK4. The final step is shortened to land on t_end.
Trajectory flow(const NumericHamiltonian& f, const ContactPoint& x0, double t_end, double step);

/// Writes "t,u,q1..qn,p1..pn,residual" with 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& t);

// ---- method of characteristics ---------------------------------------------

struct BoundarySample {
  std::vector<double> q;
  double u = 0.0;
  std::vector<double> normal;
  /// Tangential part of p; derived from neighbouring samples when n == 2.
  std::optional<std::vector<double>> tangential_p;
};

struct FanOptions {
  double t_end = 1.0;
  double step = 1e-3;
  /// Initial guess for the transverse component of p at the first sample;
  /// its sign selects the branch. Later samples continue from the previous root.
  double seed = 1.0;
  int max_newton = 50;
  double newton_tol = 1e-13;
  /// Cosine between F_p and the normal below which the ray counts as tangent.
  /// A double root is only resolved to about sqrt(machine epsilon).
  double tangential_tol = 1e-6;
};

struct CharacteristicFan {
  std::vector<ContactPoint> initial;
  std::vector<Trajectory> rays;
  double max_residual = 0.0;
};

CharacteristicFan solve_characteristic_pde(const NumericHamiltonian& f, const std::vector<BoundarySample>& boundary,
                                           const FanOptions& options);

// ---- Reeb dynamics ---------------------------------------------------------

/// Reeb field as numerator / normalizer: V = N / alpha(N), where N spans the
/// kernel of d alpha (signed Pfaffians of principal minors).
struct ReebField {
  VectorComponents numerator;
  Symbol normalizer;

  std::vector<double> at(const std::vector<double>& coords) const;
};

/// Unique V with i_V d alpha = 0 and i_V alpha = 1. Throws SingularForm.
ReebField reeb_field(const DifferentialForm& alpha, const ContactChart& chart);

// ---- reparametrization -----------------------------------------------------

/// Flows F and phi(F) from x0 (F(x0) = 0) and returns the largest distance from
/// a sample of either curve to the piecewise-linear interpolant of the other.
double reparametrization_check(const NumericHamiltonian& f, std::function<double(double)> phi,
                               std::function<double(double)> dphi, const ContactPoint& x0, double t_end,
                               double step);

// ---- Legendrian lift -------------------------------------------------------

struct LegendrianCurve {
  std::vector<double> u, q, p;
  double area = 0.0;           // trapezoid value of the closed integral of p dq
  double closure_gap = 0.0;    // |u(end) - u(0)| after returning to the start
  double max_tangency = 0.0;   // max |du - p_mid dq| over segments
};

/// Lifts a closed plane curve (samples without the repeated endpoint) by
/// u = u0 + integral of p dq. Throws NonZeroArea.
LegendrianCurve legendrian_lift(const std::vector<double>& q, const std::vector<double>& p, double u0 = 0.0,
                                double rel_tol = 1e-8);

}  // namespace contactq
