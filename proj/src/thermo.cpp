#include "contactq/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "contactq/errors.hpp"

namespace contactq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ThermoState complete(double U, double V, double S, double beta, double ptilde) {
  ThermoState s{U, V, S, 0, 0, beta, ptilde};
  if (beta != 0.0) {
    s.T = 1.0 / beta;
    s.P = ptilde / beta;
  } else {
    s.T = kInf;
    s.P = ptilde == 0.0 ? 0.0 : std::copysign(kInf, ptilde);
  }
  return s;
}

void require_positive(double nR, double U, double V) {
  if (!(nR > 0) || !(U > 0) || !(V > 0)) throw NonPositiveInput("nR, U and V must be positive");
}

}  // namespace

ThermoState ideal_gas(double nR, double U, double V) {
  require_positive(nR, U, V);
  ThermoState s;
  s.U = U;
  s.V = V;
  s.S = nR * std::log(std::pow(U, 1.5) / V);
  s.T = 2.0 * U / (3.0 * nR);
  s.P = nR * s.T / V;
  s.beta = 3.0 * nR / (2.0 * U);
  s.ptilde = nR / V;
  return s;
}

FundamentalRelation FundamentalRelation::ideal_gas(double nR) {
  if (!(nR > 0)) throw NonPositiveInput("nR must be positive");
  return FundamentalRelation("ideal-gas", [nR](double U, double V) {
    require_positive(nR, U, V);
    return EntropyJet{nR * std::log(std::pow(U, 1.5) / V), 1.5 * nR / U, -nR / V};
  });
}

FundamentalRelation FundamentalRelation::shifted_volume(double nR, double b) {
  if (!(nR > 0)) throw NonPositiveInput("nR must be positive");
  return FundamentalRelation("shifted-volume", [nR, b](double U, double V) {
    if (!(U > 0) || !(V > b)) throw DomainError("shifted-volume relation needs U > 0 and V > b");
    return EntropyJet{nR * std::log(std::pow(U, 1.5) * (V - b)), 1.5 * nR / U, nR / (V - b)};
  });
}

FundamentalRelation FundamentalRelation::constant(double S0) {
  return FundamentalRelation("constant", [S0](double, double) { return EntropyJet{S0, 0.0, 0.0}; });
}

ThermoState FundamentalRelation::state(double U, double V) const {
  EntropyJet j = eval_(U, V);
  if (!std::isfinite(j.S) || !std::isfinite(j.S_U) || !std::isfinite(j.S_V))
    throw DomainError("fundamental relation is not finite at (" + std::to_string(U) + ", " + std::to_string(V) + ")");
  return complete(U, V, j.S, j.S_U, -j.S_V);
}

double FundamentalRelation::partials_check(const std::vector<std::array<double, 2>>& points, double h) const {
  double worst = 0.0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); };
  for (auto [U, V] : points) {
    EntropyJet j = eval_(U, V);
    double su = (eval_(U + h, V).S - eval_(U - h, V).S) / (2 * h);
    double sv = (eval_(U, V + h).S - eval_(U, V - h).S) / (2 * h);
    worst = std::max({worst, rel(j.S_U, su), rel(j.S_V, sv)});
  }
  return worst;
}

// ---------------------------------------------------------------------------

ThermoGrid parse_grid(std::string_view text) {
  auto axis = [](std::string_view part, double& lo, double& hi, int& count) {
    std::string s(part);
    char tail = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &lo, &hi, &count, &tail) != 3)
      throw DomainError("grid axis must look like lo:hi:count, got '" + s + "'");
    if (count < 2 || !(hi > lo)) throw DomainError("grid axis needs lo < hi and at least two points");
  };
  auto comma = text.find(',');
  if (comma == std::string_view::npos) throw DomainError("grid must look like U0:U1:nU,V0:V1:nV");
  ThermoGrid g;
  axis(text.substr(0, comma), g.U0, g.U1, g.nU);
  axis(text.substr(comma + 1), g.V0, g.V1, g.nV);
  return g;
}

LegendreMap legendre_submanifold(const FundamentalRelation& f, const ThermoGrid& grid) {
  if (grid.nU < 2 || grid.nV < 2 || !(grid.U1 > grid.U0) || !(grid.V1 > grid.V0))
    throw DomainError("degenerate thermodynamic grid");
  LegendreMap m{grid, {}};
  m.states.reserve(static_cast<std::size_t>(grid.nU) * static_cast<std::size_t>(grid.nV));
  for (int i = 0; i < grid.nU; ++i) {
    double U = grid.U0 + (grid.U1 - grid.U0) * i / (grid.nU - 1);
    for (int j = 0; j < grid.nV; ++j) {
      double V = grid.V0 + (grid.V1 - grid.V0) * j / (grid.nV - 1);
      m.states.push_back(f.state(U, V));
    }
  }
  return m;
}

namespace {

template <class Sample, class Defect>
double max_over_edges(const ThermoGrid& g, const std::vector<Sample>& s, Defect defect) {
  double worst = 0.0;
  auto idx = [&](int i, int j) { return static_cast<std::size_t>(i * g.nV + j); };
  for (int i = 0; i < g.nU; ++i) {
    for (int j = 0; j < g.nV; ++j) {
      if (i + 1 < g.nU) worst = std::max(worst, defect(s[idx(i, j)], s[idx(i + 1, j)]));
      if (j + 1 < g.nV) worst = std::max(worst, defect(s[idx(i, j)], s[idx(i, j + 1)]));
    }
  }
  return worst;
}

}  // namespace

double first_law_residual(const LegendreMap& m) {
  return max_over_edges(m.grid, m.states, [](const ThermoState& a, const ThermoState& b) {
    double dU = b.U - a.U, dV = b.V - a.V;
    double beta = 0.5 * (a.beta + b.beta), pt = 0.5 * (a.ptilde + b.ptilde);
    return std::abs((b.S - a.S) - beta * dU + pt * dV) / std::hypot(dU, dV);
  });
}

double maxwell_defect(const FundamentalRelation& f, const ThermoGrid& grid, double h) {
  double worst = 0.0;
  for (int i = 0; i < grid.nU; ++i) {
    double U = grid.U0 + (grid.U1 - grid.U0) * i / (grid.nU - 1);
    for (int j = 0; j < grid.nV; ++j) {
      double V = grid.V0 + (grid.V1 - grid.V0) * j / (grid.nV - 1);
      double dbeta_dV = (f(U, V + h).S_U - f(U, V - h).S_U) / (2 * h);
      double dpt_dU = (-f(U + h, V).S_V + f(U - h, V).S_V) / (2 * h);
      double a = dbeta_dV, b = -dpt_dU;
      worst = std::max(worst, std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}));
    }
  }
  return worst;
}

ContactPoint to_contact_point(const ThermoState& s) { return ContactPoint{s.S, {s.U, s.V}, {s.beta, -s.ptilde}}; }

// ---------------------------------------------------------------------------

Picture parse_picture(std::string_view name) {
  if (name == "S" || name == "entropy") return Picture::Entropy;
  if (name == "U" || name == "energy") return Picture::Energy;
  if (name == "U-PV" || name == "enthalpy") return Picture::Enthalpy;
  if (name == "U-TS" || name == "U+TS" || name == "helmholtz") return Picture::Helmholtz;
  if (name == "U-TS-PV" || name == "gibbs") return Picture::Gibbs;
  throw DomainError("unknown potential picture '" + std::string(name) + "'");
}

std::string picture_name(Picture p) {
  switch (p) {
    case Picture::Entropy: return "S";
    case Picture::Energy: return "U";
    case Picture::Enthalpy: return "U-PV";
    case Picture::Helmholtz: return "U-TS";
    case Picture::Gibbs: return "U-TS-PV";
  }
  return "?";
}

std::array<std::string, 2> picture_base(Picture p) {
  switch (p) {
    case Picture::Entropy: return {"U", "V"};
    case Picture::Energy: return {"S", "V"};
    case Picture::Enthalpy: return {"S", "P"};
    case Picture::Helmholtz: return {"V", "T"};
    case Picture::Gibbs: return {"T", "P"};
  }
  return {"", ""};
}

Picture picture_for_base(std::string_view a, std::string_view b) {
  auto is = [&](std::string_view x, std::string_view y) { return (a == x && b == y) || (a == y && b == x); };
  if (is("S", "T") || is("V", "P")) throw ConjugatePair("'" + std::string(a) + "' and '" + std::string(b) + "' are conjugate");
  for (Picture p : {Picture::Entropy, Picture::Energy, Picture::Enthalpy, Picture::Helmholtz, Picture::Gibbs}) {
    auto base = picture_base(p);
    if (is(base[0], base[1])) return p;
  }
  throw DomainError("no potential picture with base (" + std::string(a) + ", " + std::string(b) + ")");
}

namespace {

PictureSample to_sample(const ThermoState& s, Picture p) {
  if (p != Picture::Entropy && (!std::isfinite(s.T) || !std::isfinite(s.P)))
    throw DomainError("picture change needs finite temperature and pressure");
  switch (p) {
    case Picture::Entropy: return {{s.U, s.V}, s.S, {s.beta, -s.ptilde}};
    case Picture::Energy: return {{s.S, s.V}, s.U, {s.T, s.P}};
    case Picture::Enthalpy: return {{s.S, s.P}, s.U - s.P * s.V, {s.T, -s.V}};
    case Picture::Helmholtz: return {{s.V, s.T}, s.U - s.T * s.S, {s.P, -s.S}};
    case Picture::Gibbs: return {{s.T, s.P}, s.U - s.T * s.S - s.P * s.V, {-s.S, -s.V}};
  }
  return {};
}

ThermoState from_sample(const PictureSample& x, Picture p) {
  double U, V, S, T, P;
  switch (p) {
    case Picture::Entropy:
      return complete(x.x[0], x.x[1], x.potential, x.c[0], -x.c[1]);
    case Picture::Energy:
      S = x.x[0], V = x.x[1], U = x.potential, T = x.c[0], P = x.c[1];
      break;
    case Picture::Enthalpy:
      S = x.x[0], P = x.x[1], T = x.c[0], V = -x.c[1], U = x.potential + P * V;
      break;
    case Picture::Helmholtz:
      V = x.x[0], T = x.x[1], P = x.c[0], S = -x.c[1], U = x.potential + T * S;
      break;
    case Picture::Gibbs:
      T = x.x[0], P = x.x[1], S = -x.c[0], V = -x.c[1], U = x.potential + T * S + P * V;
      break;
    default:
      throw DomainError("unknown picture");
  }
  return ThermoState{U, V, S, T, P, 1.0 / T, P / T};
}

// The new base must be a chart over the patch: the Jacobian of the base
// coordinates with respect to the grid indices keeps one strict sign.
void check_invertible(const PictureMap& m) {
  const ThermoGrid& g = m.grid;
  auto at = [&](int i, int j) { return m.samples[static_cast<std::size_t>(i * g.nV + j)].x; };
  int sign = 0;
  for (int i = 0; i + 1 < g.nU; ++i) {
    for (int j = 0; j + 1 < g.nV; ++j) {
      auto o = at(i, j), a = at(i + 1, j), b = at(i, j + 1);
      double det = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
      int s = det > 0 ? 1 : det < 0 ? -1 : 0;
      if (s == 0 || (sign != 0 && s != sign))
        throw NonInvertibleChart("base (" + picture_base(m.picture)[0] + ", " + picture_base(m.picture)[1] +
                                 ") folds over the sampled patch");
      sign = s;
    }
  }
}

}  // namespace

PictureMap switch_potential(const LegendreMap& m, Picture target) {
  PictureMap out{target, m.grid, {}};
  out.samples.reserve(m.states.size());
  for (const auto& s : m.states) out.samples.push_back(to_sample(s, target));
  check_invertible(out);
  return out;
}

PictureMap switch_potential(const PictureMap& m, Picture target) { return switch_potential(from_picture(m), target); }

LegendreMap from_picture(const PictureMap& m) {
  LegendreMap out{m.grid, {}};
  out.states.reserve(m.samples.size());
  for (const auto& x : m.samples) out.states.push_back(from_sample(x, m.picture));
  return out;
}

double first_law_residual(const PictureMap& m) {
  return max_over_edges(m.grid, m.samples, [](const PictureSample& a, const PictureSample& b) {
    double d0 = b.x[0] - a.x[0], d1 = b.x[1] - a.x[1];
    double len = std::hypot(d0, d1);
    if (len == 0.0) return 0.0;
    double c0 = 0.5 * (a.c[0] + b.c[0]), c1 = 0.5 * (a.c[1] + b.c[1]);
    return std::abs((b.potential - a.potential) - c0 * d0 - c1 * d1) / len;
  });
}

void write_thermo_csv(std::ostream& out, const LegendreMap& m) {
  out << "U,V,S,T,P\n";
  char buf[160];
  for (const auto& s : m.states) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.U, s.V, s.S, s.T, s.P);
    out << buf;
  }
}

}  // namespace contactq
