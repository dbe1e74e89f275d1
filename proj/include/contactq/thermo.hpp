#pragma once

#include <array>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "contactq/characteristics.hpp"

namespace contactq {

/// One equilibrium state. beta = 1/T and ptilde = P/T are stored alongside
/// T and P so degenerate relations (beta = 0) stay representable.
struct ThermoState {
  double U = 0, V = 0, S = 0, T = 0, P = 0;
  double beta = 0, ptilde = 0;
};

struct EntropyJet {
  double S = 0, S_U = 0, S_V = 0;
};

/// Entropy as a function of (U, V) with exact first partials.
class FundamentalRelation {
 public:
  using Evaluator = std::function<EntropyJet(double U, double V)>;

  FundamentalRelation(std::string name, Evaluator eval) : name_(std::move(name)), eval_(std::move(eval)) {}

  /// S = nR log(U^{3/2} / V), entropy constant zero.
  static FundamentalRelation ideal_gas(double nR);
  /// S = nR log(U^{3/2} (V - b)); a smooth non-ideal test relation.
  static FundamentalRelation shifted_volume(double nR, double b);
  static FundamentalRelation constant(double S0);

  const std::string& name() const { return name_; }
  EntropyJet operator()(double U, double V) const { return eval_(U, V); }
  ThermoState state(double U, double V) const;

  /// Largest relative mismatch of S_U, S_V against central differences.
  double partials_check(const std::vector<std::array<double, 2>>& points, double h = 1e-6) const;

 private:
  std::string name_;
  Evaluator eval_;
};

/// Ideal gas state from the closed-form expressions. Throws NonPositiveInput.
ThermoState ideal_gas(double nR, double U, double V);

struct ThermoGrid {
  double U0 = 1, U1 = 2, V0 = 1, V1 = 2;
  int nU = 11, nV = 11;  // points per axis, >= 2
};

/// Parses "U0:U1:nU,V0:V1:nV".
ThermoGrid parse_grid(std::string_view text);

/// States on a rectangular (U, V) grid, row-major with V varying fastest.
struct LegendreMap {
  ThermoGrid grid;
  std::vector<ThermoState> states;

  const ThermoState& at(int i, int j) const { return states[static_cast<std::size_t>(i * grid.nV + j)]; }
};

LegendreMap legendre_submanifold(const FundamentalRelation& f, const ThermoGrid& grid);

/// Max over grid edges of |dS - beta dU + ptilde dV| / edge length, using
/// endpoint averages of beta and ptilde.
double first_law_residual(const LegendreMap& m);

/// Max relative defect of d beta / dV = -d ptilde / dU at interior nodes.
double maxwell_defect(const FundamentalRelation& f, const ThermoGrid& grid, double h = 1e-4);

/// Darboux coordinates u = S, q = (U, V), p = (beta, -ptilde).
ContactPoint to_contact_point(const ThermoState& s);

// ---- potentials ------------------------------------------------------------

/// Potential pictures. With the sign law dU = T dS + P dV satisfied by the
/// samples, each is a partial Legendre transform:
///   Entropy    S          base (U, V)   dS        = beta dU - ptilde dV
///   Energy     U          base (S, V)   dU        = T dS + P dV
///   Enthalpy   U - PV     base (S, P)   d(U-PV)   = T dS - V dP
///   Helmholtz  U - TS     base (V, T)   d(U-TS)   = P dV - S dT
///   Gibbs      U - TS - PV base (T, P)  d(U-TS-PV) = -S dT - V dP
enum class Picture { Entropy, Energy, Enthalpy, Helmholtz, Gibbs };

/// Accepts "S", "U", "U-PV", "U-TS" (also spelled "U+TS"), "U-TS-PV".
Picture parse_picture(std::string_view name);
std::string picture_name(Picture p);
std::array<std::string, 2> picture_base(Picture p);

/// Picture whose base is the given pair of variable names from {U,V,S,T,P}.
/// Throws ConjugatePair for (S,T) or (V,P), DomainError for other pairs.
Picture picture_for_base(std::string_view a, std::string_view b);

struct PictureSample {
  std::array<double, 2> x;  // base coordinates
  double potential = 0;
  std::array<double, 2> c;  // d potential = c0 dx0 + c1 dx1
};

struct PictureMap {
  Picture picture = Picture::Entropy;
  ThermoGrid grid;
  std::vector<PictureSample> samples;
};

/// Re-expresses the submanifold in another picture. Throws NonInvertibleChart
/// when the new base coordinates fold over the patch.
PictureMap switch_potential(const LegendreMap& m, Picture target);
PictureMap switch_potential(const PictureMap& m, Picture target);
/// Recovers the (U, V, S, T, P) samples from any picture.
LegendreMap from_picture(const PictureMap& m);

/// Max over grid edges of |d potential - c dx| / |dx|.
double first_law_residual(const PictureMap& m);

/// CSV "U,V,S,T,P" with 17 significant digits.
void write_thermo_csv(std::ostream& out, const LegendreMap& m);

}  // namespace contactq
