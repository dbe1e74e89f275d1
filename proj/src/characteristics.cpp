#include "contactq/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "contactq/errors.hpp"

namespace contactq {

bool ContactPoint::finite() const {
  auto ok = [](double v) { return std::isfinite(v); };
  return ok(u) && std::all_of(q.begin(), q.end(), ok) && std::all_of(p.begin(), p.end(), ok);
}

namespace {

std::vector<double> coordinates(const ContactPoint& x, std::size_t registry_size) {
  std::vector<double> v(registry_size, 0.0);
  const int n = x.n();
  v[0] = x.u;
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(1 + i)] = x.q[static_cast<std::size_t>(i)];
    v[static_cast<std::size_t>(1 + n + i)] = x.p[static_cast<std::size_t>(i)];
  }
  return v;
}

void check_dimension(const ContactPoint& x, int n) {
  if (x.n() != n || static_cast<int>(x.p.size()) != n) throw DomainError("contact point has the wrong dimension");
}

}  // namespace

NumericHamiltonian NumericHamiltonian::from_symbol(const Symbol& f_in, const ContactChart& chart,
                                                   const std::map<std::string, double>& bindings) {
  Symbol f = chart.adopt(f_in);
  const auto& reg = *chart.registry();
  const int n = chart.n();
  std::vector<double> params(reg.size(), 0.0);
  for (std::size_t k = chart.dimension(); k < reg.size(); ++k) {
    auto it = bindings.find(reg.name(k));
    if (it == bindings.end()) {
      if (f.depends_on(k)) throw DomainError("parameter '" + reg.name(k) + "' is not bound");
      continue;
    }
    params[k] = it->second;
  }
  struct Compiled {
    CompiledPolynomial value, du;
    std::vector<CompiledPolynomial> dq, dp;
  };
  auto c = std::make_shared<Compiled>();
  c->value = CompiledPolynomial(f);
  c->du = CompiledPolynomial(differentiate(f, chart.u_slot()));
  for (int i = 0; i < n; ++i) {
    c->dq.emplace_back(differentiate(f, chart.q_slot(i)));
    c->dp.emplace_back(differentiate(f, chart.p_slot(i)));
  }
  const std::size_t size = reg.size();
  return NumericHamiltonian(n, [c, params, size, n](const ContactPoint& x) {
    check_dimension(x, n);
    std::vector<double> v = coordinates(x, size);
    for (std::size_t k = static_cast<std::size_t>(2 * n + 1); k < size; ++k) v[k] = params[k];
    HamiltonianJet j;
    j.value = c->value(v);
    j.du = c->du(v);
    for (int i = 0; i < n; ++i) {
      j.dq.push_back(c->dq[static_cast<std::size_t>(i)](v));
      j.dp.push_back(c->dp[static_cast<std::size_t>(i)](v));
    }
    return j;
  });
}

NumericHamiltonian NumericHamiltonian::eikonal(const ContactChart& chart,
                                               const std::vector<std::vector<Symbol>>& metric, double k) {
  const int n = chart.n();
  if (static_cast<int>(metric.size()) != n) throw DomainError("metric must be n x n");
  struct Entry {
    CompiledPolynomial g;
    std::vector<CompiledPolynomial> dg;
  };
  auto table = std::make_shared<std::vector<Entry>>();
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(metric[static_cast<std::size_t>(a)].size()) != n) throw DomainError("metric must be n x n");
    for (int b = 0; b < n; ++b) {
      Symbol g = chart.adopt(metric[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
      if (g.depends_on(chart.u_slot())) throw DomainError("metric may depend on q only");
      for (int i = 0; i < n; ++i)
        if (g.depends_on(chart.p_slot(i))) throw DomainError("metric may depend on q only");
      Entry e{CompiledPolynomial(g), {}};
      for (int l = 0; l < n; ++l) e.dg.emplace_back(differentiate(g, chart.q_slot(l)));
      table->push_back(std::move(e));
    }
  }
  const std::size_t size = chart.registry()->size();
  const double k2 = k * k;
  return NumericHamiltonian(n, [table, size, n, k2](const ContactPoint& x) {
    check_dimension(x, n);
    std::vector<double> v = coordinates(x, size);
    HamiltonianJet j;
    j.dq.assign(static_cast<std::size_t>(n), 0.0);
    j.dp.assign(static_cast<std::size_t>(n), 0.0);
    double val = -k2;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const Entry& e = (*table)[static_cast<std::size_t>(a * n + b)];
        double pa = x.p[static_cast<std::size_t>(a)];
        double pb = x.p[static_cast<std::size_t>(b)];
        double g = e.g(v);
        val += g * pa * pb;
        j.dp[static_cast<std::size_t>(a)] += g * pb;
        j.dp[static_cast<std::size_t>(b)] += g * pa;
        for (int l = 0; l < n; ++l) j.dq[static_cast<std::size_t>(l)] += e.dg[static_cast<std::size_t>(l)](v) * pa * pb;
      }
    }
    j.value = val;
    return j;
  });
}

NumericHamiltonian NumericHamiltonian::compose(std::function<double(double)> phi, std::function<double(double)> dphi,
                                               const NumericHamiltonian& f) {
  return NumericHamiltonian(f.n(), [phi = std::move(phi), dphi = std::move(dphi), f](const ContactPoint& x) {
    HamiltonianJet j = f(x);
    double s = dphi(j.value);
    j.value = phi(j.value);
    j.du *= s;
    for (auto& d : j.dq) d *= s;
    for (auto& d : j.dp) d *= s;
    return j;
  });
}

double NumericHamiltonian::gradient_check(const std::vector<ContactPoint>& points, double h) const {
  double worst = 0.0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); };
  for (const auto& x : points) {
    HamiltonianJet j = (*this)(x);
    auto central = [&](auto&& perturb) {
      ContactPoint a = x, b = x;
      perturb(a, h);
      perturb(b, -h);
      return ((*this)(a).value - (*this)(b).value) / (2 * h);
    };
    worst = std::max(worst, rel(j.du, central([](ContactPoint& y, double d) { y.u += d; })));
    for (int i = 0; i < n_; ++i) {
      auto si = static_cast<std::size_t>(i);
      worst = std::max(worst, rel(j.dq[si], central([si](ContactPoint& y, double d) { y.q[si] += d; })));
      worst = std::max(worst, rel(j.dp[si], central([si](ContactPoint& y, double d) { y.p[si] += d; })));
    }
  }
  return worst;
}

double Trajectory::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

ContactPoint characteristic_rate(const HamiltonianJet& j, const ContactPoint& x) {
  ContactPoint r;
  const auto n = x.q.size();
  r.q.resize(n);
  r.p.resize(n);
  double pfp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r.q[i] = j.dp[i];
    r.p[i] = -j.dq[i] - x.p[i] * j.du;
    pfp += x.p[i] * j.dp[i];
  }
  r.u = pfp - j.value;
  return r;
}

namespace {

ContactPoint axpy(const ContactPoint& x, double a, const ContactPoint& d) {
  ContactPoint r = x;
  r.u += a * d.u;
  for (std::size_t i = 0; i < r.q.size(); ++i) {
    r.q[i] += a * d.q[i];
    r.p[i] += a * d.p[i];
  }
  return r;
}

HamiltonianJet evaluate_guarded(const NumericHamiltonian& f, const ContactPoint& x) {
  try {
    return f(x);
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluatorFailure(std::string("hamiltonian evaluation failed: ") + e.what());
  }
}

}  // namespace

Trajectory flow(const NumericHamiltonian& f, const ContactPoint& x0, double t_end, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("step must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be non-negative");
  check_dimension(x0, f.n());
  if (!x0.finite()) throw NonFiniteState("initial state is not finite");

  Trajectory tr;
  auto steps = static_cast<long>(std::ceil(t_end / step - 1e-9));
  tr.times.reserve(static_cast<std::size_t>(steps + 1));
  tr.states.reserve(static_cast<std::size_t>(steps + 1));
  ContactPoint x = x0;
  HamiltonianJet j = evaluate_guarded(f, x);
  tr.times.push_back(0.0);
  tr.states.push_back(x);
  tr.residuals.push_back(std::abs(j.value));
  for (long s = 0; s < steps; ++s) {
    double t = static_cast<double>(s) * step;
    double t_next = s + 1 == steps ? t_end : static_cast<double>(s + 1) * step;
    double h = t_next - t;
    ContactPoint k1 = characteristic_rate(j, x);
    ContactPoint x2 = axpy(x, h / 2, k1);
    ContactPoint k2 = characteristic_rate(evaluate_guarded(f, x2), x2);
    ContactPoint x3 = axpy(x, h / 2, k2);
    ContactPoint k3 = characteristic_rate(evaluate_guarded(f, x3), x3);
    ContactPoint x4 = axpy(x, h, k3);
    ContactPoint k4 = characteristic_rate(evaluate_guarded(f, x4), x4);
    x.u += h / 6 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u);
    for (std::size_t i = 0; i < x.q.size(); ++i) {
      x.q[i] += h / 6 * (k1.q[i] + 2 * k2.q[i] + 2 * k3.q[i] + k4.q[i]);
      x.p[i] += h / 6 * (k1.p[i] + 2 * k2.p[i] + 2 * k3.p[i] + k4.p[i]);
    }
    if (!x.finite()) throw NonFiniteState("state blew up at t = " + std::to_string(t_next));
    j = evaluate_guarded(f, x);
    tr.times.push_back(t_next);
    tr.states.push_back(x);
    tr.residuals.push_back(std::abs(j.value));
  }
  return tr;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
  const int n = t.states.empty() ? 0 : t.states.front().n();
  out << "t,u";
  for (int i = 1; i <= n; ++i) out << ",q" << i;
  for (int i = 1; i <= n; ++i) out << ",p" << i;
  out << ",residual\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    const auto& s = t.states[k];
    put(t.times[k]);
    out << ',';
    put(s.u);
    for (double v : s.q) {
      out << ',';
      put(v);
    }
    for (double v : s.p) {
      out << ',';
      put(v);
    }
    out << ',';
    put(t.residuals[k]);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> tangential_momentum(const std::vector<BoundarySample>& b, std::size_t j, int n) {
  if (b[j].tangential_p) {
    if (static_cast<int>(b[j].tangential_p->size()) != n) throw DomainError("tangential_p has wrong dimension");
    return *b[j].tangential_p;
  }
  if (n == 1) return {0.0};
  if (n != 2) throw DomainError("boundary samples need explicit tangential_p when n > 2");
  if (b.size() < 2) throw DomainError("a boundary curve needs at least two samples");
  std::size_t lo = j == 0 ? 0 : j - 1;
  std::size_t hi = j + 1 == b.size() ? j : j + 1;
  double dx = b[hi].q[0] - b[lo].q[0];
  double dy = b[hi].q[1] - b[lo].q[1];
  double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) throw DomainError("coincident boundary samples");
  double slope = (b[hi].u - b[lo].u) / len2;
  return {slope * dx, slope * dy};
}

}  // namespace

CharacteristicFan solve_characteristic_pde(const NumericHamiltonian& f, const std::vector<BoundarySample>& boundary,
                                           const FanOptions& options) {
  const int n = f.n();
  CharacteristicFan fan;
  double sigma = options.seed;
  for (std::size_t j = 0; j < boundary.size(); ++j) {
    const BoundarySample& b = boundary[j];
    if (static_cast<int>(b.q.size()) != n || static_cast<int>(b.normal.size()) != n)
      throw DomainError("boundary sample has wrong dimension");
    std::vector<double> nu = b.normal;
    double norm = 0.0;
    for (double v : nu) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw DomainError("boundary normal is zero");
    for (double& v : nu) v /= norm;
    std::vector<double> pt = tangential_momentum(boundary, j, n);

    ContactPoint x{b.u, b.q, std::vector<double>(static_cast<std::size_t>(n))};
    auto set_p = [&](double s) {
      for (std::size_t i = 0; i < x.p.size(); ++i) x.p[i] = pt[i] + s * nu[i];
    };
    // Stop only once the iterate itself settles: near a double root |F| gets
    // small long before sigma does, and the slope there is what flags tangency.
    bool converged = false;
    double last_step = std::numeric_limits<double>::infinity();
    for (int it = 0; it < options.max_newton; ++it) {
      set_p(sigma);
      HamiltonianJet jet = evaluate_guarded(f, x);
      double slope = 0.0, speed = 0.0;
      for (std::size_t i = 0; i < nu.size(); ++i) {
        slope += jet.dp[i] * nu[i];
        speed += jet.dp[i] * jet.dp[i];
      }
      if (!(std::abs(slope) > options.tangential_tol * std::sqrt(speed)))
        throw TangentialCharacteristic("characteristic is tangent to the boundary at sample " + std::to_string(j));
      if (std::abs(jet.value) <= options.newton_tol && last_step <= 1e-12 * std::max(1.0, std::abs(sigma))) {
        converged = true;
        break;
      }
      last_step = jet.value / slope;
      sigma -= last_step;
      last_step = std::abs(last_step);
      if (!std::isfinite(sigma)) break;
    }
    if (!converged) throw NoRoot("Newton iteration failed at boundary sample " + std::to_string(j));
    fan.initial.push_back(x);
    fan.rays.push_back(flow(f, x, options.t_end, options.step));
    fan.max_residual = std::max(fan.max_residual, fan.rays.back().max_residual());
  }
  return fan;
}

// ---------------------------------------------------------------------------

namespace {

using SymbolMatrix = std::vector<std::vector<Symbol>>;

Symbol pfaffian(const SymbolMatrix& a, const std::vector<std::size_t>& idx, const RegistryPtr& reg) {
  if (idx.empty()) return Symbol(reg, GaussianRational(1));
  Symbol out(reg);
  const std::size_t first = idx[0];
  for (std::size_t j = 1; j < idx.size(); ++j) {
    const Symbol& aij = a[first][idx[j]];
    if (aij.is_zero()) continue;
    std::vector<std::size_t> rest;
    for (std::size_t k = 1; k < idx.size(); ++k)
      if (k != j) rest.push_back(idx[k]);
    Symbol term = aij * pfaffian(a, rest, reg);
    if (j % 2 == 1) {
      out += term;
    } else {
      out -= term;
    }
  }
  return out;
}

}  // namespace

std::vector<double> ReebField::at(const std::vector<double>& coords) const {
  double norm = evaluate(normalizer, coords).real();
  if (norm == 0.0) throw SingularForm("Reeb normalizer vanishes at this point");
  std::vector<double> v;
  for (const auto& c : numerator) v.push_back(evaluate(c, coords).real() / norm);
  return v;
}

ReebField reeb_field(const DifferentialForm& alpha, const ContactChart& chart) {
  const auto& reg = chart.registry();
  if (!same_registry(alpha.registry_ptr(), reg)) throw RegistryMismatch("form over another registry");
  if (alpha.degree() != 1) throw SingularForm("Reeb field needs a one-form");
  const std::size_t m = chart.dimension();
  DifferentialForm da = exterior_derivative(alpha);
  SymbolMatrix omega(m, std::vector<Symbol>(m, Symbol(reg)));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (a != b) omega[a][b] = da.coefficient({static_cast<int>(a), static_cast<int>(b)});

  ReebField r{VectorComponents(reg->size(), Symbol(reg)), Symbol(reg)};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < m; ++k)
      if (k != i) rest.push_back(k);
    Symbol pf = pfaffian(omega, rest, reg);
    r.numerator[i] = i % 2 == 0 ? pf : -pf;
  }
  r.normalizer = interior(r.numerator, alpha).coefficient({});
  if (r.normalizer.is_zero()) throw SingularForm("d alpha has no kernel transverse to alpha");
  return r;
}

// ---------------------------------------------------------------------------

namespace {

double distance(const ContactPoint& a, const ContactPoint& b) {
  double d = (a.u - b.u) * (a.u - b.u);
  for (std::size_t i = 0; i < a.q.size(); ++i) {
    d += (a.q[i] - b.q[i]) * (a.q[i] - b.q[i]);
    d += (a.p[i] - b.p[i]) * (a.p[i] - b.p[i]);
  }
  return std::sqrt(d);
}

double segment_distance(const ContactPoint& x, const ContactPoint& a, const ContactPoint& b) {
  // Project x onto segment [a,b] in the flat (u,q,p) metric.
  double num = (x.u - a.u) * (b.u - a.u);
  double den = (b.u - a.u) * (b.u - a.u);
  for (std::size_t i = 0; i < a.q.size(); ++i) {
    num += (x.q[i] - a.q[i]) * (b.q[i] - a.q[i]) + (x.p[i] - a.p[i]) * (b.p[i] - a.p[i]);
    den += (b.q[i] - a.q[i]) * (b.q[i] - a.q[i]) + (b.p[i] - a.p[i]) * (b.p[i] - a.p[i]);
  }
  double s = den > 0 ? std::clamp(num / den, 0.0, 1.0) : 0.0;
  ContactPoint y = axpy(a, s, axpy(b, -1.0, a));
  return distance(x, y);
}

// Max over samples of `from` of the distance to the polyline `to`. Both curves
// run in the same direction, so the closest segment is tracked with a window.
double one_sided(const std::vector<ContactPoint>& from, const std::vector<ContactPoint>& to, std::size_t window) {
  if (to.size() < 2) {
    double m = 0.0;
    for (const auto& x : from) m = std::max(m, distance(x, to.front()));
    return m;
  }
  double worst = 0.0;
  std::size_t cursor = 0;
  for (const auto& x : from) {
    std::size_t lo = cursor > window ? cursor - window : 0;
    std::size_t hi = std::min(to.size() - 1, cursor + window + 1);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = cursor;
    for (std::size_t k = lo; k < hi; ++k) {
      double d = segment_distance(x, to[k], to[k + 1]);
      if (d < best) {
        best = d;
        best_k = k;
      }
    }
    cursor = best_k;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double reparametrization_check(const NumericHamiltonian& f, std::function<double(double)> phi,
                               std::function<double(double)> dphi, const ContactPoint& x0, double t_end,
                               double step) {
  double f0 = f(x0).value;
  double speed = dphi(f0);
  if (!(speed > 0.0)) throw DomainError("phi must be increasing at F(x0)");
  NumericHamiltonian g = NumericHamiltonian::compose(phi, dphi, f);
  Trajectory a = flow(f, x0, t_end, step);
  Trajectory b = flow(g, x0, t_end / speed, step);
  auto window = static_cast<std::size_t>(std::ceil(std::max(speed, 1.0 / speed))) + 8;
  return std::max(one_sided(b.states, a.states, window), one_sided(a.states, b.states, window));
}

// ---------------------------------------------------------------------------

LegendrianCurve legendrian_lift(const std::vector<double>& q, const std::vector<double>& p, double u0,
                                double rel_tol) {
  if (q.size() != p.size() || q.empty()) throw DomainError("curve needs matching, non-empty q and p samples");
  const std::size_t n = q.size();
  LegendrianCurve c;
  c.q = q;
  c.p = p;
  c.u.resize(n);
  c.u[0] = u0;
  double u = u0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t next = (k + 1) % n;
    double dq = q[next] - q[k];
    double pm = 0.5 * (p[k] + p[next]);
    double du = pm * dq;
    c.max_tangency = std::max(c.max_tangency, std::abs(du - pm * dq));
    u += du;
    if (next != 0) c.u[next] = u;
  }
  c.area = u - u0;
  c.closure_gap = std::abs(c.area);
  auto [qmin, qmax] = std::minmax_element(q.begin(), q.end());
  auto [pmin, pmax] = std::minmax_element(p.begin(), p.end());
  double scale2 = (*qmax - *qmin) * (*qmax - *qmin) + (*pmax - *pmin) * (*pmax - *pmin);
  if (c.closure_gap > rel_tol * scale2)
    throw NonZeroArea("closed integral of p dq is " + std::to_string(c.area) + ", not zero");
  return c;
}

}  // namespace contactq
