#pragma once

#include <random>
#include <vector>

#include "contactq/symbol.hpp"

namespace contactq::testing {

// Random polynomial with small rational coefficients over the given slots.
// Slots listed in `laurent` may receive exponents in [-2, max_degree].
inline Symbol random_symbol(std::mt19937_64& rng, const RegistryPtr& reg, const std::vector<std::size_t>& slots,
                            int max_degree, int max_terms, const std::vector<std::size_t>& laurent = {},
                            bool complex_coeffs = false) {
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(slots.size()) - 1);
  std::uniform_int_distribution<int> deg(0, max_degree);
  Symbol s(reg);
  int k = nterms(rng);
  for (int t = 0; t < k; ++t) {
    Exponents e(reg->size(), 0);
    int d = deg(rng);
    for (int j = 0; j < d; ++j) e[slots[static_cast<std::size_t>(pick(rng))]] += 1;
    for (auto l : laurent) e[l] = std::uniform_int_distribution<int>(-2, 1)(rng);
    int a = num(rng);
    if (a == 0) a = 1;
    GaussianRational c(mpq_class(a, den(rng)));
    if (complex_coeffs) c += GaussianRational(mpq_class(0), mpq_class(num(rng), den(rng)));
    s.add_term(e, c);
  }
  return s;
}

}  // namespace contactq::testing
