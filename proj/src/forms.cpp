#include "contactq/forms.hpp"

#include <algorithm>

#include "contactq/errors.hpp"

namespace contactq {

namespace {

// Sorts idx in place and returns the permutation sign, or 0 on a repeat.
int normalize(FormIndex& idx) {
  int sign = 1;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b + 1 < idx.size() - a; ++b) {
      if (idx[b] > idx[b + 1]) {
        std::swap(idx[b], idx[b + 1]);
        sign = -sign;
      }
    }
  }
  for (std::size_t k = 0; k + 1 < idx.size(); ++k)
    if (idx[k] == idx[k + 1]) return 0;
  return sign;
}

void check_components(std::span<const Symbol> v, const RegistryPtr& reg) {
  if (v.size() != reg->size()) throw RegistryMismatch("vector field has wrong number of components");
  for (const auto& c : v)
    if (!same_registry(c.registry_ptr(), reg)) throw RegistryMismatch("vector component over another registry");
}

}  // namespace

DifferentialForm::DifferentialForm(RegistryPtr registry, int degree)
    : registry_(std::move(registry)), degree_(degree) {
  if (degree < 0) throw Error("negative form degree");
}

DifferentialForm DifferentialForm::scalar(const Symbol& s) {
  DifferentialForm f(s.registry_ptr(), 0);
  f.add_term({}, s);
  return f;
}

DifferentialForm DifferentialForm::basis(RegistryPtr registry, std::string_view var) {
  auto slot = static_cast<int>(registry->slot(var));
  DifferentialForm f(registry, 1);
  f.add_term({slot}, Symbol(registry, GaussianRational(1)));
  return f;
}

Symbol DifferentialForm::coefficient(FormIndex idx) const {
  int sign = normalize(idx);
  if (sign == 0) return Symbol(registry_);
  auto it = terms_.find(idx);
  if (it == terms_.end()) return Symbol(registry_);
  return sign > 0 ? it->second : -it->second;
}

void DifferentialForm::add_term(FormIndex idx, const Symbol& c) {
  if (static_cast<int>(idx.size()) != degree_) throw Error("form term has wrong degree");
  if (!same_registry(c.registry_ptr(), registry_)) throw RegistryMismatch("form coefficient over another registry");
  for (int k : idx)
    if (k < 0 || k >= static_cast<int>(registry_->size())) throw Error("form index out of range");
  int sign = normalize(idx);
  if (sign == 0 || c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(idx, sign > 0 ? c : -c);
  if (!inserted) {
    if (sign > 0) {
      it->second += c;
    } else {
      it->second -= c;
    }
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void DifferentialForm::check_same(const DifferentialForm& o) const {
  if (!same_registry(registry_, o.registry_)) throw RegistryMismatch("forms over different registries");
}

DifferentialForm& DifferentialForm::operator+=(const DifferentialForm& o) {
  check_same(o);
  if (o.degree_ != degree_ && !o.is_zero() && !is_zero()) throw Error("adding forms of different degree");
  if (is_zero()) degree_ = o.degree_;
  for (const auto& [idx, c] : o.terms_) add_term(idx, c);
  return *this;
}

DifferentialForm& DifferentialForm::operator-=(const DifferentialForm& o) { return *this += -o; }

DifferentialForm DifferentialForm::operator-() const {
  DifferentialForm r(*this);
  for (auto& [idx, c] : r.terms_) c = -c;
  return r;
}

DifferentialForm operator*(const Symbol& f, const DifferentialForm& a) {
  DifferentialForm r(a.registry_, a.degree_);
  for (const auto& [idx, c] : a.terms_) r.add_term(idx, f * c);
  return r;
}

bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
  if (!same_registry(a.registry_, b.registry_)) return false;
  if (a.is_zero() && b.is_zero()) return true;
  return a.degree_ == b.degree_ && a.terms_ == b.terms_;
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  if (!same_registry(a.registry_ptr(), b.registry_ptr())) throw RegistryMismatch("wedge of forms over different registries");
  DifferentialForm r(a.registry_ptr(), a.degree() + b.degree());
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      FormIndex idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      r.add_term(idx, ca * cb);
    }
  }
  return r;
}

DifferentialForm exterior_derivative(const DifferentialForm& a) {
  DifferentialForm r(a.registry_ptr(), a.degree() + 1);
  for (const auto& [idx, c] : a.terms()) {
    for (std::size_t k = 0; k < a.registry().size(); ++k) {
      if (!c.depends_on(k)) continue;
      FormIndex j{static_cast<int>(k)};
      j.insert(j.end(), idx.begin(), idx.end());
      r.add_term(j, differentiate(c, k));
    }
  }
  return r;
}

DifferentialForm interior(std::span<const Symbol> v, const DifferentialForm& a) {
  check_components(v, a.registry_ptr());
  if (a.degree() == 0) return DifferentialForm(a.registry_ptr(), 0);
  DifferentialForm r(a.registry_ptr(), a.degree() - 1);
  for (const auto& [idx, c] : a.terms()) {
    for (std::size_t m = 0; m < idx.size(); ++m) {
      const Symbol& vk = v[static_cast<std::size_t>(idx[m])];
      if (vk.is_zero()) continue;
      FormIndex rest;
      for (std::size_t j = 0; j < idx.size(); ++j)
        if (j != m) rest.push_back(idx[j]);
      Symbol term = vk * c;
      r.add_term(rest, m % 2 == 0 ? term : -term);
    }
  }
  return r;
}

DifferentialForm lie_derivative(std::span<const Symbol> v, const DifferentialForm& a) {
  DifferentialForm r = interior(v, exterior_derivative(a));
  DifferentialForm s = exterior_derivative(interior(v, a));
  if (r.is_zero()) return s;
  if (s.is_zero()) return r;
  return r + s;
}

Symbol apply_vector(std::span<const Symbol> v, const Symbol& f) {
  check_components(v, f.registry_ptr());
  Symbol r(f.registry_ptr());
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!v[k].is_zero() && f.depends_on(k)) r += v[k] * differentiate(f, k);
  return r;
}

VectorComponents commutator(std::span<const Symbol> v, std::span<const Symbol> w) {
  if (v.size() != w.size()) throw RegistryMismatch("vector fields of different dimension");
  VectorComponents out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(apply_vector(v, w[k]) - apply_vector(w, v[k]));
  return out;
}

std::string to_string(const DifferentialForm& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& [idx, c] : a.terms()) {
    std::string basis;
    for (int k : idx) basis += (basis.empty() ? "d" : "^d") + a.registry().name(static_cast<std::size_t>(k));
    std::string coeff = to_string(c);
    std::string term = basis.empty() ? coeff : "(" + coeff + ")*" + basis;
    out += out.empty() ? term : " + " + term;
  }
  return out;
}

}  // namespace contactq
