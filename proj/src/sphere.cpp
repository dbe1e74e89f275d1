#include "contactq/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "contactq/errors.hpp"

namespace contactq {

namespace {

RegistryPtr x_registry(int m) {
  std::vector<std::string> names;
  for (int i = 1; i <= m; ++i) names.push_back("x" + std::to_string(i));
  return make_registry(std::move(names));
}

RegistryPtr z_registry_for(int n) {
  std::vector<std::string> names;
  if (n == 1) {
    names = {"z", "zb"};
  } else {
    for (int a = 1; a <= n; ++a) names.push_back("z" + std::to_string(a));
    for (int a = 1; a <= n; ++a) names.push_back("zb" + std::to_string(a));
  }
  return make_registry(std::move(names));
}

bool is_invertible(AmbientStructure::Matrix a) {
  const std::size_t m = a.size();
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (piv < m && sgn(a[piv][col]) == 0) ++piv;
    if (piv == m) return false;
    std::swap(a[piv], a[col]);
    for (std::size_t r = col + 1; r < m; ++r) {
      if (sgn(a[r][col]) == 0) continue;
      mpq_class f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return true;
}

bool is_positive_block_diagonal(const AmbientStructure::Matrix& w) {
  const std::size_t m = w.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      bool in_block = i / 2 == j / 2 && i != j;
      if (!in_block && sgn(w[i][j]) != 0) return false;
    }
  for (std::size_t i = 0; i < m; i += 2)
    if (sgn(w[i][i + 1]) <= 0) return false;
  return true;
}

Symbol r_squared(const RegistryPtr& reg) {
  Symbol r2(reg);
  for (std::size_t i = 0; i < reg->size(); ++i) r2 += Symbol::variable(reg, reg->name(i), 2);
  return r2;
}

// Pi_{i=1..k} 2i(2j + 2i + m - 2), the factor in Lap^k(|x|^{2k} h_j) = c h_j.
mpz_class laplacian_power_factor(int k, int j, int m) {
  mpz_class c = 1;
  for (int i = 1; i <= k; ++i) c *= 2 * i * (2 * j + 2 * i + m - 2);
  return c;
}

void check_registry(const HarmonicExpansion& f, const AmbientStructure& s) {
  if (!(*f.registry() == *s.registry()))
    throw StructureMismatch("harmonic expansion lives on a different ambient space than the structure");
}

// R A = omega^{ij} x_i d_j A.
Symbol rotation(const Symbol& a, const AmbientStructure& s) {
  const auto& reg = s.registry();
  Symbol out(reg);
  const int m = s.dimension();
  for (int j = 0; j < m; ++j) {
    Symbol dj = differentiate(a, static_cast<std::size_t>(j));
    if (dj.is_zero()) continue;
    for (int i = 0; i < m; ++i) {
      const mpq_class& w = s.omega()[i][j];
      if (sgn(w) == 0) continue;
      out += GaussianRational(w) * (Symbol::variable(reg, reg->name(i)) * dj);
    }
  }
  return out;
}

}  // namespace

// ---- ambient structure -----------------------------------------------------

AmbientStructure::AmbientStructure(Matrix omega) : omega_(std::move(omega)) {
  const std::size_t m = omega_.size();
  if (m == 0 || m % 2 != 0) throw StructureMismatch("structure matrix must have even positive size");
  for (const auto& row : omega_)
    if (row.size() != m) throw StructureMismatch("structure matrix must be square");
  for (auto& row : omega_)
    for (auto& v : row) v.canonicalize();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (omega_[i][j] != -omega_[j][i]) throw StructureMismatch("structure matrix must be antisymmetric");
  if (!is_invertible(omega_)) throw StructureMismatch("structure matrix must be invertible");

  n_ = static_cast<int>(m / 2);
  registry_ = x_registry(static_cast<int>(m));
  z_registry_ = z_registry_for(n_);

  // Orthogonal U with U^T omega U = diag(lambda_a J), lambda_a > 0.
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(m, m);
  std::vector<double> lambda(n_);
  if (is_positive_block_diagonal(omega_)) {
    for (int a = 0; a < n_; ++a) lambda[a] = omega_[2 * a][2 * a + 1].get_d();
  } else {
    Eigen::MatrixXd w(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) w(i, j) = omega_[i][j].get_d();
    Eigen::RealSchur<Eigen::MatrixXd> schur(w);
    u = schur.matrixU();
    Eigen::MatrixXd t = schur.matrixT();
    const double scale = w.norm();
    for (int a = 0; a < n_; ++a) {
      const int k = 2 * a;
      if (std::abs(t(k + 1, k)) <= 1e-14 * scale) throw StructureMismatch("normal form did not split into 2x2 blocks");
      double b = t(k, k + 1);
      if (b < 0) {
        u.col(k).swap(u.col(k + 1));
        b = -b;
      }
      lambda[a] = b;
    }
  }
  for (int a = 0; a < n_; ++a) frequencies_.push_back(2 * lambda[a]);

  // y = U^T x; y_{2a} = sqrt(lambda) Q, y_{2a+1} = sqrt(lambda) P,
  // Q = (z + zb)/sqrt2, P = i (z - zb)/sqrt2.
  to_z_.assign(m, std::vector<std::complex<double>>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (int a = 0; a < n_; ++a) {
      const double r = std::sqrt(lambda[a] / 2);
      const double cq = u(i, 2 * a) * r, cp = u(i, 2 * a + 1) * r;
      to_z_[i][a] = {cq, cp};
      to_z_[i][n_ + a] = {cq, -cp};
    }
}

AmbientStructure AmbientStructure::from_frequencies(const std::vector<mpq_class>& frequencies) {
  const std::size_t n = frequencies.size();
  Matrix w(2 * n, std::vector<mpq_class>(2 * n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    if (sgn(frequencies[a]) <= 0) throw StructureMismatch("frequencies must be positive");
    w[2 * a][2 * a + 1] = frequencies[a] / 2;
    w[2 * a + 1][2 * a] = -frequencies[a] / 2;
  }
  return AmbientStructure(std::move(w));
}

Symbol ambient_poisson(const Symbol& a, const Symbol& b, const AmbientStructure& s) {
  if (!(a.registry() == *s.registry()) || !(b.registry() == *s.registry()))
    throw StructureMismatch("ambient bracket needs symbols over x1..x2n");
  const int m = s.dimension();
  std::vector<Symbol> da, db;
  for (int i = 0; i < m; ++i) {
    da.push_back(differentiate(a, static_cast<std::size_t>(i)));
    db.push_back(differentiate(b, static_cast<std::size_t>(i)));
  }
  Symbol out(a.registry_ptr());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const mpq_class& w = s.omega()[i][j];
      if (sgn(w) == 0 || da[i].is_zero() || db[j].is_zero()) continue;
      out += GaussianRational(w) * (da[i] * db[j]);
    }
  return out;
}

// ---- harmonic expansions ---------------------------------------------------

Symbol laplacian(const Symbol& p) {
  Symbol out(p.registry_ptr());
  for (std::size_t i = 0; i < p.registry().size(); ++i) out += differentiate(differentiate(p, i), i);
  return out;
}

HarmonicExpansion::HarmonicExpansion(RegistryPtr x_registry) : registry_(std::move(x_registry)) {}

void HarmonicExpansion::set_component(int d, const Symbol& h) {
  if (!(h.registry() == *registry_)) throw RegistryMismatch("harmonic component over a different registry");
  for (const auto& [e, c] : h.terms())
    if (std::accumulate(e.begin(), e.end(), 0) != d)
      throw DomainError("component of degree " + std::to_string(d) + " is not homogeneous");
  if (!laplacian(h).is_zero()) throw DomainError("component of degree " + std::to_string(d) + " is not harmonic");
  if (h.is_zero())
    components_.erase(d);
  else
    components_.insert_or_assign(d, h);
}

void HarmonicExpansion::set_tensor(int d, const std::vector<mpq_class>& entries) {
  const int m = static_cast<int>(registry_->size());
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(m);
  if (entries.size() != total) throw DomainError("tensor must have m^d entries");

  auto flat = [&](const std::vector<int>& idx) {
    std::size_t f = 0;
    for (int i : idx) f = f * static_cast<std::size_t>(m) + static_cast<std::size_t>(i);
    return f;
  };
  mpz_class factorial = 1;
  for (int k = 2; k <= d; ++k) factorial *= k;

  Symbol poly(registry_);
  std::vector<int> idx(d, 0);
  for (std::size_t f = 0; f < total; ++f) {
    std::size_t rest = f;
    for (int k = d - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(rest % m);
      rest /= m;
    }
    std::vector<int> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    if (entries[f] != entries[flat(sorted)]) throw DomainError("tensor is not symmetric");
    if (sgn(entries[f]) == 0) continue;
    Exponents e(m, 0);
    for (int i : idx) ++e[i];
    poly.add_term(e, GaussianRational(mpq_class(entries[f] / factorial)));
  }
  if (!laplacian(poly).is_zero()) throw DomainError("tensor is not traceless");
  set_component(d, poly);
}

HarmonicExpansion HarmonicExpansion::reduce(const Symbol& p) {
  const RegistryPtr& reg = p.registry_ptr();
  const int m = static_cast<int>(reg->size());
  std::map<int, Symbol> by_degree;
  for (const auto& [e, c] : p.terms()) {
    for (int k : e)
      if (k < 0) throw DomainError("harmonic reduction needs a polynomial");
    int d = std::accumulate(e.begin(), e.end(), 0);
    by_degree.try_emplace(d, reg).first->second.add_term(e, c);
  }
  const Symbol r2 = r_squared(reg);
  std::map<int, Symbol> parts;
  for (auto& [d, rest] : by_degree) {
    for (int k = d / 2; k >= 0; --k) {
      const int j = d - 2 * k;
      Symbol h = rest;
      for (int t = 0; t < k; ++t) h = laplacian(h);
      if (h.is_zero()) continue;
      h *= GaussianRational(mpq_class(mpz_class(1), laplacian_power_factor(k, j, m)));
      rest -= r2.pow(static_cast<unsigned>(k)) * h;
      parts.try_emplace(j, reg).first->second += h;
    }
  }
  HarmonicExpansion out(reg);
  for (auto& [j, h] : parts) out.set_component(j, h);
  return out;
}

Symbol HarmonicExpansion::component(int d) const {
  auto it = components_.find(d);
  return it == components_.end() ? Symbol(registry_) : it->second;
}

Symbol HarmonicExpansion::polynomial() const {
  Symbol out(registry_);
  for (const auto& [d, h] : components_) out += h;
  return out;
}

HarmonicExpansion& HarmonicExpansion::operator+=(const HarmonicExpansion& o) {
  if (!(*registry_ == *o.registry_)) throw RegistryMismatch("harmonic expansions over different registries");
  for (const auto& [d, h] : o.components_) {
    Symbol sum = component(d) + h;
    if (sum.is_zero())
      components_.erase(d);
    else
      components_.insert_or_assign(d, sum);
  }
  return *this;
}

HarmonicExpansion operator-(const HarmonicExpansion& a, const HarmonicExpansion& b) {
  return a + GaussianRational(-1) * b;
}

HarmonicExpansion operator*(const GaussianRational& c, HarmonicExpansion a) {
  if (c.is_zero()) a.components_.clear();
  for (auto& [d, h] : a.components_) h *= c;
  return a;
}

Symbol sphere_lift(const HarmonicExpansion& f) { return r_squared(f.registry()) * f.polynomial(); }

HarmonicExpansion sphere_bracket(const HarmonicExpansion& f, const HarmonicExpansion& g, const AmbientStructure& s) {
  check_registry(f, s);
  check_registry(g, s);
  return HarmonicExpansion::reduce(ambient_poisson(sphere_lift(f), sphere_lift(g), s));
}

HarmonicExpansion lagrange_sphere_bracket(const HarmonicExpansion& f, const HarmonicExpansion& g,
                                          const AmbientStructure& s) {
  check_registry(f, s);
  check_registry(g, s);
  // On |x| = 1: {r^(2-a) A, r^(2-b) B} = {A,B} - (2-b) B RA + (2-a) A RB.
  Symbol total(s.registry());
  for (const auto& [a, fa] : f.components()) {
    const Symbol rf = rotation(fa, s);
    for (const auto& [b, gb] : g.components()) {
      total += ambient_poisson(fa, gb, s);
      total -= GaussianRational(2 - b) * (gb * rf);
      total += GaussianRational(2 - a) * (fa * rotation(gb, s));
    }
  }
  return HarmonicExpansion::reduce(total);
}

// ---- Fock operators --------------------------------------------------------

FockOp::FockOp(int n, int cutoff) : n_(n), cutoff_(cutoff) {
  if (n < 1) throw DomainError("Fock space needs at least one mode");
  if (cutoff < 0) throw CutoffTooSmall("cutoff must be non-negative");
  dim_ = 1;
  for (int a = 0; a < n; ++a) dim_ *= cutoff + 1;
  rows_.resize(static_cast<std::size_t>(dim_));
}

FockOp FockOp::identity(int n, int cutoff) {
  FockOp id(n, cutoff);
  for (long r = 0; r < id.dim_; ++r) id.add(r, r, 1.0);
  return id;
}

std::vector<int> FockOp::occupation(long index) const {
  std::vector<int> occ(n_);
  for (int a = n_ - 1; a >= 0; --a) {
    occ[a] = static_cast<int>(index % (cutoff_ + 1));
    index /= cutoff_ + 1;
  }
  return occ;
}

long FockOp::index(const std::vector<int>& occupation) const {
  long idx = 0;
  for (int k : occupation) idx = idx * (cutoff_ + 1) + k;
  return idx;
}

FockOp::Entry FockOp::at(long row, long col) const {
  const auto& r = rows_.at(static_cast<std::size_t>(row));
  auto it = r.find(col);
  return it == r.end() ? Entry{} : it->second;
}

void FockOp::add(long row, long col, Entry v) {
  if (col < 0 || col >= dim_) throw DomainError("Fock column out of range");
  auto& r = rows_.at(static_cast<std::size_t>(row));
  Entry& slot = r[col];
  slot += v;
  if (slot == Entry{}) r.erase(col);
}

std::vector<std::tuple<long, long, FockOp::Entry>> FockOp::entries() const {
  std::vector<std::tuple<long, long, Entry>> out;
  for (long r = 0; r < dim_; ++r)
    for (const auto& [c, v] : rows_[r]) out.emplace_back(r, c, v);
  return out;
}

std::size_t FockOp::nonzeros() const {
  std::size_t k = 0;
  for (const auto& r : rows_) k += r.size();
  return k;
}

FockOp FockOp::adjoint() const {
  FockOp out(n_, cutoff_);
  for (long r = 0; r < dim_; ++r)
    for (const auto& [c, v] : rows_[r]) out.rows_[c][r] = std::conj(v);
  return out;
}

bool FockOp::is_hermitian() const { return *this == adjoint(); }

double FockOp::interior_norm(int max_occupation) const {
  std::vector<long> keep;
  for (long r = 0; r < dim_; ++r) {
    auto occ = occupation(r);
    if (std::all_of(occ.begin(), occ.end(), [&](int k) { return k <= max_occupation; })) keep.push_back(r);
  }
  if (keep.empty()) return 0;
  std::map<long, Eigen::Index> pos;
  for (std::size_t k = 0; k < keep.size(); ++k) pos[keep[k]] = static_cast<Eigen::Index>(k);
  const auto sz = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(sz, sz);
  for (std::size_t k = 0; k < keep.size(); ++k)
    for (const auto& [c, v] : rows_[keep[k]]) {
      auto it = pos.find(c);
      if (it != pos.end()) m(static_cast<Eigen::Index>(k), it->second) = v;
    }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

void FockOp::check_same(const FockOp& o) const {
  if (n_ != o.n_ || cutoff_ != o.cutoff_) throw StructureMismatch("Fock operators on different spaces");
}

FockOp& FockOp::operator+=(const FockOp& o) {
  check_same(o);
  for (long r = 0; r < dim_; ++r)
    for (const auto& [c, v] : o.rows_[r]) add(r, c, v);
  return *this;
}

FockOp& FockOp::operator-=(const FockOp& o) {
  check_same(o);
  for (long r = 0; r < dim_; ++r)
    for (const auto& [c, v] : o.rows_[r]) add(r, c, -v);
  return *this;
}

FockOp& FockOp::operator*=(Entry c) {
  for (auto& r : rows_) {
    for (auto it = r.begin(); it != r.end();) {
      it->second *= c;
      it = it->second == Entry{} ? r.erase(it) : std::next(it);
    }
  }
  return *this;
}

FockOp operator*(const FockOp& a, const FockOp& b) {
  a.check_same(b);
  FockOp out(a.n_, a.cutoff_);
  for (long r = 0; r < a.dim_; ++r) {
    auto& acc = out.rows_[r];
    for (const auto& [k, va] : a.rows_[r])
      for (const auto& [c, vb] : b.rows_[k]) acc[c] += va * vb;
    for (auto it = acc.begin(); it != acc.end();) it = it->second == FockOp::Entry{} ? acc.erase(it) : std::next(it);
  }
  return out;
}

bool operator==(const FockOp& a, const FockOp& b) {
  return a.n_ == b.n_ && a.cutoff_ == b.cutoff_ && a.rows_ == b.rows_;
}

FockOp commutator(const FockOp& a, const FockOp& b) { return a * b - b * a; }

namespace {

// sqrt of an exact integer, exact whenever the integer is a perfect square.
double sqrt_exact(const mpz_class& v) {
  if (mpz_perfect_square_p(v.get_mpz_t())) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
    return r.get_d();
  }
  return std::sqrt(v.get_d());
}

// Applies a word of single-mode letters (true = creation), rightmost first,
// to |k>. Returns the squared amplitude, 0 if the word leaves the band.
mpz_class word_weight(const std::vector<bool>& word, int k, int cutoff) {
  mpz_class w = 1;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it) {
      if (k == cutoff) return 0;
      ++k;
      w *= k;
    } else {
      if (k == 0) return 0;
      w *= k;
      --k;
    }
  }
  return w;
}

// Symmetrized single-mode operator of A+^alpha A^beta: amplitudes indexed by
// the input occupation, output occupation k + alpha - beta.
std::vector<double> symmetrized_mode(int alpha, int beta, int cutoff) {
  std::vector<bool> word(static_cast<std::size_t>(alpha + beta), false);
  std::fill(word.begin(), word.begin() + alpha, true);
  std::sort(word.begin(), word.end());
  std::vector<std::vector<bool>> words;
  do words.push_back(word);
  while (std::next_permutation(word.begin(), word.end()));

  std::vector<double> amp(static_cast<std::size_t>(cutoff + 1), 0.0);
  for (int k = 0; k <= cutoff; ++k) {
    const int out = k + alpha - beta;
    if (out < 0 || out > cutoff) continue;
    double sum = 0;
    for (const auto& w : words) sum += sqrt_exact(word_weight(w, k, cutoff));
    amp[k] = sum / static_cast<double>(words.size());
  }
  return amp;
}

FockOp monomial_operator(const Exponents& e, int n, int cutoff) {
  FockOp out(n, cutoff);
  std::vector<std::vector<double>> amps;
  for (int a = 0; a < n; ++a) amps.push_back(symmetrized_mode(e[a], e[n + a], cutoff));
  for (long c = 0; c < out.dimension(); ++c) {
    auto occ = out.occupation(c);
    double v = 1;
    for (int a = 0; a < n && v != 0; ++a) {
      v *= amps[a][occ[a]];
      occ[a] += e[a] - e[n + a];
    }
    if (v != 0) out.add(out.index(occ), c, v);
  }
  return out;
}

Exponents conjugate_exponents(const Exponents& e, int n) {
  Exponents c(e.size());
  for (int a = 0; a < n; ++a) {
    c[a] = e[n + a];
    c[n + a] = e[a];
  }
  return c;
}

// Exact conjugate-symmetry test for an exact polynomial in z, zb.
bool is_real_z(const Symbol& p, int n) {
  for (const auto& [e, c] : p.terms())
    if (p.coefficient(conjugate_exponents(e, n)) != c.conj()) return false;
  return true;
}

FockOp quantize_impl(const ZPolynomial& p, int n, int cutoff, bool hermitian) {
  FockOp out(n, cutoff);
  for (const auto& [e, c] : p) {
    if (e.size() != static_cast<std::size_t>(2 * n)) throw StructureMismatch("polynomial has the wrong number of modes");
    if (std::accumulate(e.begin(), e.end(), 0) > 2 * cutoff)
      throw CutoffTooSmall("monomial degree exceeds twice the cutoff " + std::to_string(cutoff));
  }
  for (const auto& [e, c] : p) {
    if (!hermitian) {
      if (c != std::complex<double>{}) out += c * monomial_operator(e, n, cutoff);
      continue;
    }
    const Exponents ce = conjugate_exponents(e, n);
    if (ce < e && p.count(ce)) continue;  // handled with its partner
    auto it = p.find(ce);
    const std::complex<double> partner = it == p.end() ? std::complex<double>{} : it->second;
    if (ce == e) {
      const double re = c.real();
      if (re != 0) out += std::complex<double>(re) * monomial_operator(e, n, cutoff);
      continue;
    }
    const std::complex<double> avg = 0.5 * (c + std::conj(partner));
    if (avg == std::complex<double>{}) continue;
    FockOp x = avg * monomial_operator(e, n, cutoff);
    out += x;
    out += x.adjoint();
  }
  return out;
}

}  // namespace

FockOp fock_word(const std::vector<Ladder>& word, int n, int cutoff) {
  FockOp out(n, cutoff);
  for (const auto& l : word)
    if (l.mode < 0 || l.mode >= n) throw DomainError("ladder mode out of range");
  for (long c = 0; c < out.dimension(); ++c) {
    auto occ = out.occupation(c);
    mpz_class w = 1;
    bool alive = true;
    for (auto it = word.rbegin(); it != word.rend() && alive; ++it) {
      int& k = occ[it->mode];
      if (it->creation) {
        if (k == cutoff) alive = false;
        else w *= ++k;
      } else {
        if (k == 0) alive = false;
        else w *= k--;
      }
    }
    if (alive) out.add(out.index(occ), c, sqrt_exact(w));
  }
  return out;
}

FockOp hamiltonian(const AmbientStructure& s, int cutoff) {
  FockOp h(s.n(), cutoff);
  for (long r = 0; r < h.dimension(); ++r) {
    auto occ = h.occupation(r);
    double e = 0;
    for (int a = 0; a < s.n(); ++a) e += s.frequencies()[a] * (occ[a] + 0.5);
    h.add(r, r, e);
  }
  return h;
}

FockOp hamiltonian_commutator(const AmbientStructure& s, const FockOp& x) {
  if (x.n() != s.n()) throw StructureMismatch("operator and structure have different mode counts");
  FockOp out(x.n(), x.cutoff());
  for (const auto& [r, c, v] : x.entries()) {
    auto orow = x.occupation(r), ocol = x.occupation(c);
    double shift = 0;
    for (int a = 0; a < s.n(); ++a) shift += s.frequencies()[a] * (orow[a] - ocol[a]);
    if (shift != 0) out.add(r, c, shift * v);
  }
  return out;
}

ZPolynomial to_z(const Symbol& x_poly, const AmbientStructure& s) {
  if (!(x_poly.registry() == *s.registry())) throw StructureMismatch("polynomial is not over x1..x2n");
  const int m = s.dimension();
  ZPolynomial out;
  for (const auto& [e, c] : x_poly.terms()) {
    ZPolynomial acc{{Exponents(m, 0), c.to_complex()}};
    for (int i = 0; i < m; ++i)
      for (int t = 0; t < e[i]; ++t) {
        ZPolynomial next;
        for (const auto& [ae, av] : acc)
          for (int k = 0; k < m; ++k) {
            const auto coef = s.to_z()[i][k];
            if (coef == std::complex<double>{}) continue;
            Exponents ne = ae;
            ++ne[k];
            next[ne] += av * coef;
          }
        acc = std::move(next);
      }
    for (const auto& [ae, av] : acc) out[ae] += av;
  }
  return out;
}

ZPolynomial to_z_exact(const Symbol& z_poly) {
  ZPolynomial out;
  for (const auto& [e, c] : z_poly.terms()) out[e] = c.to_complex();
  return out;
}

FockOp fock_quantize(const ZPolynomial& p, int n, int cutoff) { return quantize_impl(p, n, cutoff, false); }

FockOp fock_quantize(const Symbol& z_poly, int cutoff) {
  const std::size_t m = z_poly.registry().size();
  if (m == 0 || m % 2 != 0) throw StructureMismatch("z registry must hold z and zb for every mode");
  const int n = static_cast<int>(m / 2);
  if (!(z_poly.registry() == *z_registry_for(n))) throw StructureMismatch("polynomial is not over the z registry");
  return quantize_impl(to_z_exact(z_poly), n, cutoff, is_real_z(z_poly, n));
}

FockOp sphere_operator(const HarmonicExpansion& f, const AmbientStructure& s, int cutoff) {
  check_registry(f, s);
  const FockOp h = hamiltonian(s, cutoff);
  FockOp out(s.n(), cutoff);
  for (const auto& [d, fd] : f.components()) {
    if (d == 0) {
      out += fd.constant_term().to_complex() * h;
      continue;
    }
    FockOp phi = quantize_impl(to_z(fd, s), s.n(), cutoff, fd.is_real());
    for (const auto& [r, c, v] : phi.entries()) out.add(r, c, 0.5 * (h.at(r, r) + h.at(c, c)) * v);
  }
  return out;
}

CommutatorReport commutator_report(const HarmonicExpansion& f, const HarmonicExpansion& g, const AmbientStructure& s,
                                   int cutoff) {
  CommutatorReport rep{sphere_bracket(f, g, s)};
  const FockOp fo = sphere_operator(f, s, cutoff), go = sphere_operator(g, s, cutoff);
  const FockOp defect = commutator(fo, go) - std::complex<double>(0, 1) * sphere_operator(rep.bracket, s, cutoff);
  rep.interior_defect = defect.interior_norm(cutoff / 2);
  rep.full_defect = defect.dimension() <= 2500 ? defect.interior_norm(cutoff) : std::nan("");
  return rep;
}

}  // namespace contactq
