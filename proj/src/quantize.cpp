#include "contactq/quantize.hpp"

#include <lapacke.h>

#include <cmath>
#include <complex>

#include "contactq/errors.hpp"
#include "contactq/parser.hpp"

namespace contactq {

namespace {

std::string k_name(int n, int i) { return n == 1 ? "k" : "k" + std::to_string(i + 1); }

// x (x-1) ... (x-m+1); valid for negative x.
long falling(int x, int m) {
  long r = 1;
  for (int j = 0; j < m; ++j) r *= x - j;
  return r;
}

long factorial(int m) {
  long r = 1;
  for (int j = 2; j <= m; ++j) r *= j;
  return r;
}

long binomial(int a, int j) {
  if (j < 0 || j > a) return 0;
  return falling(a, j) / factorial(j);
}

GaussianRational ipow(const GaussianRational& base, int m) {
  GaussianRational r(1);
  for (int j = 0; j < m; ++j) r *= base;
  return r;
}

const GaussianRational kMinusI(mpq_class(0), mpq_class(-1));
const GaussianRational kMinusHalfI(mpq_class(0), mpq_class(-1, 2));

}  // namespace

QuantumChart::QuantumChart(int n, std::vector<std::string> parameters) : chart_(n, parameters) {
  std::vector<std::string> r{"u"}, l{std::string(kLaurentVariable), "u"};
  for (int i = 0; i < n; ++i) r.push_back(q_name(n, i));
  for (int i = 0; i < n; ++i) r.push_back(p_name(n, i));
  for (int i = 0; i < n; ++i) l.push_back(q_name(n, i));
  for (int i = 0; i < n; ++i) l.push_back(k_name(n, i));
  r.emplace_back(kHbar);
  l.emplace_back(kHbar);
  for (const auto& p : parameters) {
    r.push_back(p);
    l.push_back(p);
  }
  restricted_ = make_registry(std::move(r));
  lifted_ = make_registry(std::move(l));
}

Symbol QuantumChart::parse(std::string_view text) const { return parse_expr(text, restricted_); }
Symbol QuantumChart::parse_lifted(std::string_view text) const { return parse_expr(text, lifted_); }

// Restricted slots: u=0, q_i=1+i, p_i=1+n+i, hbar=1+2n, params after.
// Lifted slots are the same shifted by one, with w in front and k in place of p.

Symbol lift(const Symbol& f_in, const QuantumChart& qc) {
  Symbol f = embed(f_in, qc.restricted());
  const int n = qc.n();
  const std::size_t rsize = qc.restricted()->size();
  Symbol out(qc.lifted());
  for (const auto& [e, c] : f.terms()) {
    Exponents le(rsize + 1, 0);
    int pdeg = 0;
    for (int i = 0; i < n; ++i) pdeg += e[static_cast<std::size_t>(1 + n + i)];
    le[0] = 1 - pdeg;
    for (std::size_t s = 0; s < rsize; ++s) le[s + 1] = e[s];
    out.add_term(le, c);
  }
  return out;
}

Symbol restrict_w1(const Symbol& a_in, const QuantumChart& qc) {
  Symbol a = embed(a_in, qc.lifted());
  const std::size_t rsize = qc.restricted()->size();
  Symbol out(qc.restricted());
  for (const auto& [e, c] : a.terms()) out.add_term(Exponents(e.begin() + 1, e.begin() + 1 + static_cast<long>(rsize)), c);
  return out;
}

Symbol lifted_poisson(const Symbol& a_in, const Symbol& b_in, const QuantumChart& qc) {
  Symbol a = embed(a_in, qc.lifted());
  Symbol b = embed(b_in, qc.lifted());
  auto d = [](const Symbol& s, std::size_t slot) { return differentiate(s, slot); };
  Symbol out = d(a, qc.u_slot()) * d(b, qc.w_slot()) - d(a, qc.w_slot()) * d(b, qc.u_slot());
  for (int i = 0; i < qc.n(); ++i)
    out += d(a, qc.k_slot(i)) * d(b, qc.q_slot(i)) - d(a, qc.q_slot(i)) * d(b, qc.k_slot(i));
  return out;
}

namespace {

struct MoyalPair {
  std::size_t x, y;  // term c (d_x A)(d_y B) - c (d_y A)(d_x B) at first order
};

// Expands exp(c sum_pairs (dx (x) dy - dy (x) dx)) on one pair of monomials.
void moyal_monomials(const Exponents& ea, const Exponents& eb, const GaussianRational& coeff,
                     const std::vector<MoyalPair>& pairs, std::size_t laurent, std::size_t hbar, std::size_t pair,
                     Exponents& acc, GaussianRational weight, int order, Symbol& out) {
  if (pair == pairs.size()) {
    Exponents e = acc;
    e[hbar] += order;
    out.add_term(e, coeff * weight * ipow(kMinusHalfI, order));
    return;
  }
  const auto [x, y] = pairs[pair];
  // Only derivatives along polynomial variables bound the expansion.
  auto bound = [&](std::size_t slot, const Exponents& e) { return slot == laurent ? 1 << 20 : e[slot]; };
  const int amax = std::min(bound(x, ea), bound(y, eb));
  const int bmax = std::min(bound(y, ea), bound(x, eb));
  for (int a = 0; a <= amax; ++a) {
    for (int b = 0; b <= bmax; ++b) {
      long num = falling(ea[x], a) * falling(ea[y], b) * falling(eb[y], a) * falling(eb[x], b);
      if (num == 0) continue;
      GaussianRational w = weight * GaussianRational::ratio(num, factorial(a) * factorial(b));
      if (b % 2 == 1) w = -w;
      int sx = acc[x], sy = acc[y];
      acc[x] -= a + b;
      acc[y] -= a + b;
      moyal_monomials(ea, eb, coeff, pairs, laurent, hbar, pair + 1, acc, w, order + a + b, out);
      acc[x] = sx;
      acc[y] = sy;
    }
  }
}

}  // namespace

Symbol moyal(const Symbol& a_in, const Symbol& b_in, const QuantumChart& qc) {
  Symbol a = embed(a_in, qc.lifted());
  Symbol b = embed(b_in, qc.lifted());
  std::vector<MoyalPair> pairs{{qc.u_slot(), qc.w_slot()}};
  for (int i = 0; i < qc.n(); ++i) pairs.push_back({qc.k_slot(i), qc.q_slot(i)});
  Symbol out(qc.lifted());
  const std::size_t size = qc.lifted()->size();
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      Exponents acc(size);
      for (std::size_t s = 0; s < size; ++s) acc[s] = ea[s] + eb[s];
      moyal_monomials(ea, eb, ca * cb, pairs, qc.w_slot(), qc.hbar_slot(), 0, acc, GaussianRational(1), 0, out);
    }
  }
  return out;
}

Symbol restricted_star(const Symbol& f, const Symbol& g, const QuantumChart& qc) {
  return restrict_w1(moyal(lift(f, qc), lift(g, qc), qc), qc);
}

Symbol hbar_coefficient(const Symbol& s, int k, const QuantumChart&) {
  std::size_t slot = s.registry().slot(kHbar);
  Symbol out(s.registry_ptr());
  for (const auto& [e, c] : s.terms()) {
    if (e[slot] != k) continue;
    Exponents f = e;
    f[slot] = 0;
    out.add_term(f, c);
  }
  return out;
}

// ---------------------------------------------------------------------------

WaveOperator::WaveOperator(const QuantumChart& qc) : n_(qc.n()), registry_(qc.restricted()) {
  slots_.push_back(0);
  for (int i = 0; i < n_; ++i) slots_.push_back(static_cast<std::size_t>(1 + i));
}

void WaveOperator::add_term(const Orders& d, const Symbol& coeff_in) {
  if (static_cast<int>(d.size()) != n_ + 1) throw DomainError("derivative orders have the wrong length");
  for (int o : d)
    if (o < 0) throw DomainError("negative derivative order");
  Symbol coeff = embed(coeff_in, registry_);
  for (int i = 0; i < n_; ++i)
    if (coeff.depends_on(static_cast<std::size_t>(1 + n_ + i)))
      throw DomainError("wave operator coefficients may not depend on p");
  if (coeff.is_zero()) return;
  auto it = terms_.find(d);
  if (it == terms_.end()) {
    terms_.emplace(d, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

int WaveOperator::order() const {
  int m = 0;
  for (const auto& [d, c] : terms_) {
    int s = 0;
    for (int o : d) s += o;
    m = std::max(m, s);
  }
  return m;
}

namespace {

Symbol derive(Symbol s, const std::vector<std::size_t>& slots, const std::vector<int>& orders) {
  for (std::size_t i = 0; i < slots.size(); ++i)
    for (int k = 0; k < orders[i] && !s.is_zero(); ++k) s = differentiate(s, slots[i]);
  return s;
}

// Calls fn(gamma) for every multi-index 0 <= gamma <= alpha.
template <class Fn>
void for_each_below(const std::vector<int>& alpha, Fn fn) {
  std::vector<int> g(alpha.size(), 0);
  while (true) {
    fn(g);
    std::size_t i = 0;
    while (i < g.size() && g[i] == alpha[i]) g[i++] = 0;
    if (i == g.size()) return;
    ++g[i];
  }
}

}  // namespace

Symbol WaveOperator::apply(const Symbol& f_in) const {
  Symbol f = embed(f_in, registry_);
  Symbol out(registry_);
  for (const auto& [d, c] : terms_) out += c * derive(f, slots_, d);
  return out;
}

WaveOperator& WaveOperator::operator+=(const WaveOperator& o) {
  if (o.n_ != n_ || !same_registry(o.registry_, registry_)) throw RegistryMismatch("wave operators over different charts");
  for (const auto& [d, c] : o.terms_) add_term(d, c);
  return *this;
}

WaveOperator operator-(const WaveOperator& a, const WaveOperator& b) {
  WaveOperator out = a;
  for (const auto& [d, c] : b.terms_) out.add_term(d, -c);
  return out;
}

WaveOperator compose(const WaveOperator& a, const WaveOperator& b) {
  if (a.n_ != b.n_ || !same_registry(a.registry_, b.registry_)) throw RegistryMismatch("wave operators over different charts");
  WaveOperator out = a;
  out.terms_.clear();
  for (const auto& [alpha, ca] : a.terms_) {
    for (const auto& [beta, cb] : b.terms_) {
      for_each_below(alpha, [&](const std::vector<int>& gamma) {
        long mult = 1;
        WaveOperator::Orders d(alpha.size());
        for (std::size_t i = 0; i < alpha.size(); ++i) {
          mult *= binomial(alpha[i], gamma[i]);
          d[i] = alpha[i] - gamma[i] + beta[i];
        }
        Symbol db = derive(cb, a.slots_, gamma);
        if (!db.is_zero()) out.add_term(d, ca * db * GaussianRational(mult));
      });
    }
  }
  return out;
}

WaveOperator adjoint(const WaveOperator& a) {
  WaveOperator out = a;
  out.terms_.clear();
  for (const auto& [alpha, c] : a.terms_) {
    int total = 0;
    for (int o : alpha) total += o;
    Symbol cc = c.conj();
    for_each_below(alpha, [&](const std::vector<int>& gamma) {
      long mult = total % 2 == 0 ? 1 : -1;
      std::vector<int> rest(alpha.size());
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        mult *= binomial(alpha[i], gamma[i]);
        rest[i] = alpha[i] - gamma[i];
      }
      Symbol d = derive(cc, a.slots_, rest);
      if (!d.is_zero()) out.add_term(gamma, d * GaussianRational(mult));
    });
  }
  return out;
}

std::string to_string(const WaveOperator& op) {
  if (op.is_zero()) return "0";
  std::string out;
  for (const auto& [d, c] : op.terms()) {
    if (!out.empty()) out += " + ";
    out += "(" + to_string(c) + ")";
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] == 0) continue;
      out += "*d_" + op.registry()->name(i);
      if (d[i] > 1) out += "^" + std::to_string(d[i]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Weyl(x^a xi^m) = sum_j j! C(a,j) C(m,j) (-i hbar/2)^j x^(a-j) xihat^(m-j)
// with xihat = -i hbar d_x, applied one conjugate pair at a time.
void weyl_expand(const Exponents& le, const GaussianRational& c, const QuantumChart& qc, std::size_t pair,
                 Exponents& coeff_exp, WaveOperator::Orders& orders, GaussianRational weight, WaveOperator& out) {
  const int n = qc.n();
  if (pair == static_cast<std::size_t>(n + 1)) {
    out.add_term(orders, Symbol::monomial(qc.restricted(), coeff_exp, c * weight));
    return;
  }
  // pair 0: (u, w); pair i+1: (q_i, k_i). Restricted slot of the position variable:
  std::size_t x_lifted = pair == 0 ? qc.u_slot() : qc.q_slot(static_cast<int>(pair - 1));
  std::size_t xi_lifted = pair == 0 ? qc.w_slot() : qc.k_slot(static_cast<int>(pair - 1));
  std::size_t x_restricted = x_lifted - 1;
  const int a = le[x_lifted];
  const int m = le[xi_lifted];
  const std::size_t hbar = qc.hbar_slot() - 1;
  for (int j = 0; j <= std::min(a, m); ++j) {
    GaussianRational w = weight * GaussianRational(factorial(j) * binomial(a, j) * binomial(m, j)) *
                         ipow(kMinusHalfI, j) * ipow(kMinusI, m - j);
    coeff_exp[x_restricted] -= j;
    coeff_exp[hbar] += m;
    orders[pair] = m - j;
    weyl_expand(le, c, qc, pair + 1, coeff_exp, orders, w, out);
    coeff_exp[x_restricted] += j;
    coeff_exp[hbar] -= m;
  }
  orders[pair] = 0;
}

}  // namespace

WaveOperator weyl_operator(const Symbol& f, const QuantumChart& qc, Ordering ordering) {
  const int n = qc.n();
  WaveOperator out(qc);
  if (ordering == Ordering::ProductForm) {
    Symbol g = embed(f, qc.restricted());
    const std::size_t hbar = qc.hbar_slot() - 1;
    for (const auto& [e, c] : g.terms()) {
      Exponents ce = e;
      WaveOperator::Orders d(static_cast<std::size_t>(n + 1), 0);
      int pdeg = 0;
      for (int i = 0; i < n; ++i) {
        int ci = e[static_cast<std::size_t>(1 + n + i)];
        ce[static_cast<std::size_t>(1 + n + i)] = 0;
        d[static_cast<std::size_t>(1 + i)] = ci;
        pdeg += ci;
      }
      d[0] = pdeg + 1;
      ce[hbar] += 2 * pdeg + 1;
      GaussianRational k = ipow(GaussianRational(-1), pdeg) * kMinusI;
      out.add_term(d, Symbol::monomial(qc.restricted(), ce, c * k));
    }
    return out;
  }
  Symbol lifted = lift(f, qc);
  for (const auto& [le, c] : lifted.terms()) {
    if (le[qc.w_slot()] < 0)
      throw LaurentObstruction("monomial with p-degree >= 2 has no Weyl differential operator; use the product form");
    Exponents coeff_exp(le.begin() + 1, le.end());
    for (int i = 0; i < n; ++i) coeff_exp[static_cast<std::size_t>(1 + n + i)] = 0;  // k moves to derivatives
    WaveOperator::Orders orders(static_cast<std::size_t>(n + 1), 0);
    weyl_expand(le, c, qc, 0, coeff_exp, orders, GaussianRational(1), out);
  }
  return out;
}

WaveOperator schrodinger_reduce(const Symbol& f, const QuantumChart& qc) {
  Symbol g = embed(f, qc.restricted());
  if (g.depends_on(std::size_t{0})) throw DependsOnU("reduction needs a hamiltonian independent of u");
  // On exp(i u/hbar) phi(q), d_u acts as i/hbar; every product-form term has
  // enough hbar factors for that to stay polynomial.
  WaveOperator product = weyl_operator(g, qc, Ordering::ProductForm);
  WaveOperator out(qc);
  const std::size_t hbar = qc.hbar_slot() - 1;
  const GaussianRational i = GaussianRational::i();
  for (const auto& [d, c] : product.terms()) {
    Symbol reduced(qc.restricted());
    for (const auto& [e, k] : c.terms()) {
      Exponents ee = e;
      ee[hbar] -= d[0];
      if (ee[hbar] < 0) throw DomainError("reduction produced a negative power of hbar");
      reduced.add_term(ee, k * ipow(i, d[0]));
    }
    WaveOperator::Orders dq = d;
    dq[0] = 0;
    out.add_term(dq, reduced);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> finite_difference_weights(int m, double x0, const std::vector<double>& x) {
  // Fornberg's recursion; c[j][k] is the weight of node j for the k-th derivative.
  const int n = static_cast<int>(x.size()) - 1;
  if (m < 0 || n < m) throw DomainError("not enough nodes for the requested derivative");
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n + 1), std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0, c5 = c4;
    c4 = x[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          auto uk = static_cast<std::size_t>(k);
          c[ui][uk] = c1 * (k * c[ui - 1][uk - 1] - c5 * c[ui - 1][uk]) / c2;
        }
        c[ui][0] = -c1 * c5 * c[ui - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        auto uk = static_cast<std::size_t>(k);
        c[uj][uk] = (c4 * c[uj][uk] - k * c[uj][uk - 1]) / c3;
      }
      c[uj][0] = c4 * c[uj][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w;
  for (const auto& row : c) w.push_back(row[static_cast<std::size_t>(m)]);
  return w;
}

namespace {

std::vector<double> bound_values(const RegistryPtr& reg, std::size_t first_param, double hbar, std::size_t hbar_slot,
                                 const std::map<std::string, double>& bindings) {
  std::vector<double> v(reg->size(), 0.0);
  v[hbar_slot] = hbar;
  for (std::size_t s = first_param; s < reg->size(); ++s) {
    auto it = bindings.find(reg->name(s));
    if (it != bindings.end()) v[s] = it->second;
  }
  return v;
}

}  // namespace

double eikonal_residual(const Symbol& f_in, const QuantumChart& qc, const std::function<double(double)>& chi,
                        const std::function<double(double)>& dchi, double hbar, const EikonalGrid& grid,
                        const std::map<std::string, double>& bindings) {
  if (qc.n() != 1) throw DomainError("eikonal residual is implemented for n = 1");
  if (!(hbar > 0)) throw DomainError("hbar must be positive");
  if (grid.points < 1 || !(grid.b >= grid.a)) throw DomainError("bad eikonal grid");
  Symbol f = embed(f_in, qc.restricted());
  if (f.depends_on(kHbar)) throw DomainError("the classical symbol may not depend on hbar");
  // restricted slots: u=0, q=1, p=2, hbar=3, params from 4
  std::vector<double> vals = bound_values(qc.restricted(), 4, hbar, 3, bindings);

  WaveOperator op = weyl_operator(f, qc, Ordering::ProductForm);
  const int max_q = op.order();
  const int half = (max_q + 9) / 2;
  const double h = std::min(hbar / 20.0, 1e-2);
  std::vector<double> offsets;
  for (int t = -half; t <= half; ++t) offsets.push_back(t * h);
  std::vector<std::vector<double>> weights;
  for (int m = 0; m <= max_q; ++m) weights.push_back(finite_difference_weights(m, 0.0, offsets));

  const std::complex<double> I(0.0, 1.0);
  double sum = 0.0;
  for (int j = 0; j < grid.points; ++j) {
    double q = grid.points == 1 ? grid.a : grid.a + (grid.b - grid.a) * j / (grid.points - 1);
    double c0 = chi(q);
    vals[0] = c0;
    vals[1] = q;
    vals[2] = dchi(q);
    std::complex<double> shell = evaluate(f, vals);
    if (std::abs(shell) > 1e-10)
      throw NotOnShell("F(chi, q, chi') = " + std::to_string(std::abs(shell)) + " at q = " + std::to_string(q));
    // phi(q + s) / phi(q) = exp(i (chi(q+s) - chi(q)) / hbar) keeps phases small.
    std::vector<std::complex<double>> ratio;
    for (double s : offsets) ratio.push_back(std::exp(I * (chi(q + s) - c0) / hbar));
    std::complex<double> r = 0.0;
    for (const auto& [d, c] : op.terms()) {
      std::complex<double> dq = 0.0;
      const auto& w = weights[static_cast<std::size_t>(d[1])];
      for (std::size_t t = 0; t < ratio.size(); ++t) dq += w[t] * ratio[t];
      r += evaluate(c, vals) * std::pow(I / hbar, d[0]) * dq;
    }
    sum += std::norm(r);
  }
  return std::sqrt(sum / grid.points);
}

std::vector<double> grid_eigensolve(const WaveOperator& op, double a, double b, int N, int count,
                                    const std::map<std::string, double>& bindings) {
  if (op.n() != 1) throw DomainError("grid eigensolve is implemented for n = 1");
  if (N < 2 || !(b > a)) throw DomainError("bad eigensolve grid");
  if (count < 1 || count > N) throw DomainError("eigenvalue count out of range");
  const auto& reg = op.registry();
  // restricted slots: u=0, q=1, p=2, hbar=3
  if (bindings.find(std::string(kHbar)) == bindings.end()) {
    for (const auto& [d, c] : op.terms())
      if (c.depends_on(kHbar)) throw DomainError("hbar must be bound");
  }
  double hb = bindings.count(std::string(kHbar)) ? bindings.at(std::string(kHbar)) : 0.0;
  std::vector<double> vals = bound_values(reg, 4, hb, 3, bindings);

  std::optional<double> kinetic;
  const Symbol* potential = nullptr;
  for (const auto& [d, c] : op.terms()) {
    if (d[0] != 0 || c.depends_on(std::size_t{0}))
      throw NonHermitianDiscretization("reduced operator may not involve u");
    if (!c.is_real()) throw NonHermitianDiscretization("complex coefficient " + to_string(c));
    if (d[1] == 2) {
      if (c.depends_on(std::size_t{1})) throw NonHermitianDiscretization("second-order coefficient must be constant");
      kinetic = evaluate(c, vals).real();
    } else if (d[1] == 0) {
      potential = &c;
    } else {
      throw NonHermitianDiscretization("only a d^2 + V(q) is supported; found a derivative of order " +
                                       std::to_string(d[1]));
    }
  }
  if (!kinetic || !(*kinetic < 0)) throw NonHermitianDiscretization("second-order coefficient must be negative");

  const double h = (b - a) / (N + 1);
  std::vector<double> diag(static_cast<std::size_t>(N)), off(static_cast<std::size_t>(N - 1), *kinetic / (h * h));
  for (int j = 0; j < N; ++j) {
    vals[1] = a + (j + 1) * h;
    double v = potential ? evaluate(*potential, vals).real() : 0.0;
    diag[static_cast<std::size_t>(j)] = -2.0 * *kinetic / (h * h) + v;
  }
  lapack_int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', N, diag.data(), off.data(), nullptr, 1);
  if (info != 0) throw DomainError("tridiagonal eigensolver failed (info = " + std::to_string(info) + ")");
  return {diag.begin(), diag.begin() + count};
}

}  // namespace contactq
