#include <cmath>
#include <random>

#include "contactq/errors.hpp"
#include "contactq/quantize.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace contactq;

namespace {

const GaussianRational kI = GaussianRational::i();

Symbol d_times(Symbol s, std::size_t slot, int k) {
  for (int j = 0; j < k; ++j) s = differentiate(s, slot);
  return s;
}

// Bidifferential expansion of exp(c (dx(x)dy - dy(x)dx)) summed over pairs,
// written with repeated symbolic differentiation up to a fixed total order.
Symbol moyal_oracle(const Symbol& a, const Symbol& b, const QuantumChart& qc, int max_order) {
  struct Pair {
    std::size_t x, y;
  };
  std::vector<Pair> pairs{{qc.u_slot(), qc.w_slot()}};
  for (int i = 0; i < qc.n(); ++i) pairs.push_back({qc.k_slot(i), qc.q_slot(i)});
  Symbol hbar = Symbol::variable(qc.lifted(), "hbar");
  Symbol c = hbar * GaussianRational(mpq_class(0), mpq_class(-1, 2));
  // One first-order bidifferential step applied to a list of (left, right) factor pairs.
  using Terms = std::vector<std::pair<Symbol, Symbol>>;
  Terms current{{a, b}};
  Symbol out = a * b;
  mpq_class fact = 1;
  for (int m = 1; m <= max_order; ++m) {
    Terms next;
    for (const auto& [l, r] : current) {
      for (const auto& p : pairs) {
        next.emplace_back(d_times(l, p.x, 1), d_times(r, p.y, 1));
        next.emplace_back(-d_times(l, p.y, 1), d_times(r, p.x, 1));
      }
    }
    fact *= m;
    Symbol sum(qc.lifted());
    for (const auto& [l, r] : next) sum += l * r;
    out += c.pow(static_cast<unsigned>(m)) * sum * GaussianRational(mpq_class(1) / fact);
    current = std::move(next);
  }
  return out;
}

std::vector<std::size_t> lifted_poly_slots(const QuantumChart& qc) {
  std::vector<std::size_t> s{qc.u_slot()};
  for (int i = 0; i < qc.n(); ++i) {
    s.push_back(qc.q_slot(i));
    s.push_back(qc.k_slot(i));
  }
  return s;
}

std::vector<std::size_t> contact_slots(const QuantumChart& qc) {
  std::vector<std::size_t> s;
  for (std::size_t k = 0; k < static_cast<std::size_t>(2 * qc.n() + 1); ++k) s.push_back(k);
  return s;
}

}  // namespace

TEST_CASE("lift and restriction") {
  QuantumChart qc(1);
  const auto& c = qc.contact();
  CHECK(lift(c.parse("p"), qc) == qc.parse_lifted("k"));
  CHECK(lift(c.parse("q"), qc) == qc.parse_lifted("w*q"));
  CHECK(lift(c.parse("p^2"), qc) == qc.parse_lifted("w^-1*k^2"));
  CHECK(lift(c.parse("1"), qc) == qc.parse_lifted("w"));
  CHECK_THROWS_AS(lift(qc.parse_lifted("w"), qc), ForeignVariable);

  CHECK(restrict_w1(qc.parse_lifted("w^-1*k^2"), qc) == qc.parse("p^2"));
  CHECK(restrict_w1(qc.parse_lifted("w*q*k - i/2*hbar*w"), qc) == qc.parse("p*q - i/2*hbar"));
  CHECK(restrict_w1(qc.parse_lifted("w^2*u"), qc) == qc.parse("u"));

  std::mt19937_64 rng(1);
  for (int t = 0; t < 30; ++t) {
    Symbol f = testing::random_symbol(rng, c.registry(), contact_slots(qc), 4, 5);
    CHECK(restrict_w1(lift(f, qc), qc) == embed(f, qc.restricted()));
  }
}

TEST_CASE("Moyal examples") {
  QuantumChart qc(1);
  Symbol k = qc.parse_lifted("k"), wq = qc.parse_lifted("w*q"), w = qc.parse_lifted("w"), wu = qc.parse_lifted("w*u");
  CHECK(moyal(k, wq, qc) == qc.parse_lifted("w*q*k - i/2*hbar*w"));
  CHECK(restrict_w1(moyal(k, wq, qc), qc) == qc.parse("p*q - i/2*hbar"));
  CHECK(moyal(w, w, qc) == qc.parse_lifted("w^2"));
  CHECK(moyal(w, wu, qc) - moyal(wu, w, qc) == qc.parse_lifted("i*hbar*w"));
}

TEST_CASE("Moyal product agrees with the bidifferential oracle") {
  std::mt19937_64 rng(29);
  for (int n : {1, 2}) {
    QuantumChart qc(n);
    auto slots = lifted_poly_slots(qc);
    for (int t = 0; t < 15; ++t) {
      Symbol a = testing::random_symbol(rng, qc.lifted(), slots, 3, 3, {qc.w_slot()}, t % 2 == 0);
      Symbol b = testing::random_symbol(rng, qc.lifted(), slots, 3, 3, {qc.w_slot()});
      // u-, q- and k-degrees are at most 3 each, so order 6 covers every term.
      CHECK(moyal(a, b, qc) == moyal_oracle(a, b, qc, 6));
    }
  }
}

TEST_CASE("Moyal product is exactly associative") {
  std::mt19937_64 rng(31);
  for (int n : {1, 2}) {
    QuantumChart qc(n);
    auto slots = lifted_poly_slots(qc);
    for (int t = 0; t < 12; ++t) {
      Symbol a = testing::random_symbol(rng, qc.lifted(), slots, 3, 3, {qc.w_slot()}, true);
      Symbol b = testing::random_symbol(rng, qc.lifted(), slots, 3, 3, {qc.w_slot()});
      Symbol c = testing::random_symbol(rng, qc.lifted(), slots, 3, 3, {qc.w_slot()}, true);
      CHECK(moyal(moyal(a, b, qc), c, qc) == moyal(a, moyal(b, c, qc), qc));
    }
  }
}

TEST_CASE("first-order correspondence with the contact bracket") {
  std::mt19937_64 rng(37);
  for (int n : {1, 2}) {
    QuantumChart qc(n);
    const auto& c = qc.contact();
    for (int t = 0; t < 25; ++t) {
      Symbol f = testing::random_symbol(rng, c.registry(), contact_slots(qc), 3, 4);
      Symbol g = testing::random_symbol(rng, c.registry(), contact_slots(qc), 3, 4);
      Symbol lf = lift(f, qc), lg = lift(g, qc);
      Symbol bracket = lift(lagrange_bracket(f, g, c), qc);
      CHECK(lifted_poisson(lf, lg, qc) == bracket);
      Symbol comm = moyal(lf, lg, qc) - moyal(lg, lf, qc);
      CHECK(hbar_coefficient(comm, 1, qc) == bracket * (-kI));
      CHECK(hbar_coefficient(comm, 0, qc).is_zero());
      CHECK(restrict_w1(hbar_coefficient(moyal(lf, lg, qc), 0, qc), qc) == embed(f * g, qc.restricted()));
    }
  }
}

TEST_CASE("associator of the restricted product") {
  QuantumChart qc(1);
  const auto& c = qc.contact();
  auto witness = [&](const Symbol& f, const Symbol& g, const Symbol& h) {
    Symbol assoc = restricted_star(restricted_star(f, g, qc), h, qc) - restricted_star(f, restricted_star(g, h, qc), qc);
    return hbar_coefficient(assoc, 1, qc);
  };
  auto closed_form = [&](const Symbol& f, const Symbol& g, const Symbol& h) {
    Symbol s = lagrange_bracket(c.one(), h, c) * f * g + lagrange_bracket(c.one(), f, c) * g * h;
    return embed(s, qc.restricted()) * GaussianRational::ratio(1, 2) * kI;
  };
  Symbol got = witness(c.u(), c.q(0), c.p(0));
  CHECK(got == qc.parse("-i/2*p*q"));
  CHECK(got == closed_form(c.u(), c.q(0), c.p(0)));

  std::mt19937_64 rng(41);
  for (int t = 0; t < 20; ++t) {
    Symbol f = testing::random_symbol(rng, c.registry(), contact_slots(qc), 2, 3);
    Symbol g = testing::random_symbol(rng, c.registry(), contact_slots(qc), 2, 3);
    Symbol h = testing::random_symbol(rng, c.registry(), contact_slots(qc), 2, 3);
    CHECK(witness(f, g, h) == closed_form(f, g, h));
  }
  // u-free operands associate at first order
  CHECK(witness(c.parse("q^2"), c.parse("p"), c.parse("p*q")).is_zero());
}

TEST_CASE("Weyl operators") {
  QuantumChart qc(1);
  const auto& c = qc.contact();
  WaveOperator one = weyl_operator(c.one(), qc);
  WaveOperator expect(qc);
  expect.add_term({1, 0}, qc.parse("-i*hbar"));
  CHECK(one == expect);

  WaveOperator p = weyl_operator(c.p(0), qc);
  WaveOperator ep(qc);
  ep.add_term({0, 1}, qc.parse("-i*hbar"));
  CHECK(p == ep);

  WaveOperator q = weyl_operator(c.q(0), qc);
  WaveOperator eq(qc);
  eq.add_term({1, 0}, qc.parse("-i*hbar*q"));
  CHECK(q == eq);

  WaveOperator u = weyl_operator(c.u(), qc);
  WaveOperator eu(qc);
  eu.add_term({1, 0}, qc.parse("-i*hbar*u"));
  eu.add_term({0, 0}, qc.parse("-i/2*hbar"));
  CHECK(u == eu);

  CHECK_THROWS_AS(weyl_operator(c.parse("p^2"), qc), LaurentObstruction);
  WaveOperator pf = weyl_operator(c.parse("u*p^2"), qc, Ordering::ProductForm);
  WaveOperator epf(qc);
  epf.add_term({3, 2}, qc.parse("-i*hbar^5*u"));
  CHECK(pf == epf);
  CHECK(to_string(one) == "(-i*hbar)*d_u");
}

TEST_CASE("Weyl operators of real symbols are formally symmetric") {
  std::mt19937_64 rng(43);
  for (int n : {1, 2}) {
    QuantumChart qc(n);
    const auto& c = qc.contact();
    std::vector<std::size_t> pos;
    for (std::size_t k = 0; k <= static_cast<std::size_t>(n); ++k) pos.push_back(k);
    for (int t = 0; t < 20; ++t) {
      // p-degree at most one so the Weyl form exists
      Symbol f = testing::random_symbol(rng, c.registry(), pos, 3, 3);
      for (int i = 0; i < n; ++i) f += testing::random_symbol(rng, c.registry(), pos, 2, 2) * c.p(i);
      WaveOperator op = weyl_operator(f, qc);
      CHECK(adjoint(op) == op);
    }
    // a complex symbol is not symmetric
    Symbol g = c.u() * GaussianRational::i();
    CHECK(adjoint(weyl_operator(g, qc)) != weyl_operator(g, qc));
  }
}

TEST_CASE("operator algebra") {
  std::mt19937_64 rng(47);
  QuantumChart qc(1);
  const auto& c = qc.contact();
  std::vector<std::size_t> pos{0, 1};
  std::vector<std::size_t> fslots{0, 1, 3};
  for (int t = 0; t < 15; ++t) {
    Symbol f = testing::random_symbol(rng, c.registry(), pos, 2, 2) + testing::random_symbol(rng, c.registry(), pos, 2, 2) * c.p(0);
    Symbol g = testing::random_symbol(rng, c.registry(), pos, 2, 2) * c.p(0);
    WaveOperator a = weyl_operator(f, qc), b = weyl_operator(g, qc);
    Symbol psi = testing::random_symbol(rng, qc.restricted(), fslots, 4, 4, {}, true);
    CHECK(compose(a, b).apply(psi) == a.apply(b.apply(psi)));
    CHECK(adjoint(adjoint(a)) == a);
    CHECK(adjoint(compose(a, b)) == compose(adjoint(b), adjoint(a)));
  }
  WaveOperator p = weyl_operator(c.p(0), qc);
  WaveOperator pp(qc);
  pp.add_term({0, 2}, qc.parse("-hbar^2"));
  CHECK(compose(p, p) == pp);
}

TEST_CASE("Schrodinger reduction") {
  QuantumChart qc(1, {"E"});
  const auto& c = qc.contact();
  WaveOperator h = schrodinger_reduce(c.parse("p^2 + q^2 - E"), qc);
  WaveOperator eh(qc);
  eh.add_term({0, 2}, qc.parse("-hbar^2"));
  eh.add_term({0, 0}, qc.parse("q^2 - E"));
  CHECK(h == eh);
  WaveOperator p = schrodinger_reduce(c.p(0), qc);
  WaveOperator ep(qc);
  ep.add_term({0, 1}, qc.parse("-i*hbar"));
  CHECK(p == ep);
  CHECK_THROWS_AS(schrodinger_reduce(c.parse("u*p"), qc), DependsOnU);

  // textbook quantization sum c_m (-i hbar d)^m + V, built term by term
  std::mt19937_64 rng(53);
  std::vector<std::size_t> qslot{1};
  for (int t = 0; t < 10; ++t) {
    Symbol v = testing::random_symbol(rng, c.registry(), qslot, 4, 3);
    Symbol f = v;
    WaveOperator textbook(qc);
    textbook.add_term({0, 0}, v);
    WaveOperator step = weyl_operator(c.p(0), qc);  // -i hbar d_q
    WaveOperator power = step;
    for (int m = 1; m <= 4; ++m) {
      GaussianRational cm = GaussianRational::ratio(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3));
      f += c.p(0).pow(static_cast<unsigned>(m)) * cm;
      for (const auto& [d, coeff] : power.terms()) textbook.add_term(d, coeff * cm);
      power = compose(power, step);
    }
    CHECK(schrodinger_reduce(f, qc) == textbook);
  }
}

TEST_CASE("Fornberg weights") {
  auto w = finite_difference_weights(2, 0.0, {-1, 0, 1});
  CHECK(w[0] == doctest::Approx(1));
  CHECK(w[1] == doctest::Approx(-2));
  CHECK(w[2] == doctest::Approx(1));
  auto d1 = finite_difference_weights(1, 0.0, {-2, -1, 0, 1, 2});
  CHECK(d1[0] == doctest::Approx(1.0 / 12));
  CHECK(d1[1] == doctest::Approx(-2.0 / 3));
  CHECK(d1[3] == doctest::Approx(2.0 / 3));
}

TEST_CASE("eikonal residual") {
  QuantumChart qc(1);
  const auto& c = qc.contact();
  EikonalGrid grid{0, 1, 101};
  Symbol plane = c.parse("p^2 - 1");
  auto q_id = [](double q) { return q; };
  auto one = [](double) { return 1.0; };
  CHECK(eikonal_residual(plane, qc, q_id, one, 1e-2, grid) < 1e-8);
  CHECK_THROWS_AS(eikonal_residual(plane, qc, [](double q) { return 2 * q; }, [](double) { return 2.0; }, 1e-2, grid),
                  NotOnShell);

  // WKB phase for the index profile n(q) = 1 + q/2
  Symbol wkb = c.parse("p^2 - (1 + q/2)^2");
  auto chi = [](double q) { return q + q * q / 4; };
  auto dchi = [](double q) { return 1 + q / 2; };
  for (double hbar : {1e-2, 5e-3, 2e-3}) {
    double r1 = eikonal_residual(wkb, qc, chi, dchi, hbar, grid);
    double r2 = eikonal_residual(wkb, qc, chi, dchi, hbar / 2, grid);
    CHECK(r1 == doctest::Approx(0.5 * hbar).epsilon(1e-4));
    CHECK(r1 / r2 >= 1.8);
    CHECK(r1 / r2 <= 2.2);
  }
}

TEST_CASE("grid eigensolve") {
  QuantumChart qc(1, {"E"});
  const auto& c = qc.contact();
  WaveOperator osc = schrodinger_reduce(c.parse("p^2 + q^2 - E"), qc);
  auto ev = grid_eigensolve(osc, -10, 10, 2000, 3, {{"hbar", 1.0}, {"E", 0.0}});
  CHECK(std::abs(ev[0] - 1.0) <= 1e-3);
  CHECK(std::abs(ev[1] - 3.0) <= 1e-2);
  CHECK(std::abs(ev[2] - 5.0) <= 1e-2);
  const double pi = std::acos(-1.0);
  auto box = grid_eigensolve(schrodinger_reduce(c.parse("p^2"), qc), 0, pi, 2000, 2, {{"hbar", 1.0}});
  CHECK(std::abs(box[0] - 1.0) <= 1e-3);
  CHECK(std::abs(box[1] - 4.0) <= 1e-2);
  // hbar scales the kinetic term
  auto small = grid_eigensolve(osc, -10, 10, 2000, 1, {{"hbar", 0.5}});
  CHECK(std::abs(small[0] - 0.5) <= 1e-3);

  CHECK_THROWS_AS(grid_eigensolve(schrodinger_reduce(c.parse("p^2 + p"), qc), 0, 1, 100, 1, {{"hbar", 1.0}}),
                  NonHermitianDiscretization);
  CHECK_THROWS_AS(grid_eigensolve(schrodinger_reduce(c.parse("-p^2"), qc), 0, 1, 100, 1, {{"hbar", 1.0}}),
                  NonHermitianDiscretization);
  CHECK_THROWS_AS(grid_eigensolve(weyl_operator(c.u(), qc), 0, 1, 100, 1, {{"hbar", 1.0}}), NonHermitianDiscretization);
}
