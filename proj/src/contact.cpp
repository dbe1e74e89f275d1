#include "contactq/contact.hpp"

#include "contactq/errors.hpp"
#include "contactq/parser.hpp"

namespace contactq {

std::string q_name(int n, int i) { return n == 1 ? "q" : "q" + std::to_string(i + 1); }
std::string p_name(int n, int i) { return n == 1 ? "p" : "p" + std::to_string(i + 1); }

namespace {

RegistryPtr darboux_registry(int n, std::vector<std::string> params) {
  if (n < 1) throw Error("chart needs at least one (q,p) pair");
  std::vector<std::string> names{"u"};
  for (int i = 0; i < n; ++i) names.push_back(q_name(n, i));
  for (int i = 0; i < n; ++i) names.push_back(p_name(n, i));
  for (auto& p : params) {
    if (p == kLaurentVariable || p == kHbar) throw ForeignVariable("'" + p + "' cannot be a chart parameter");
    names.push_back(std::move(p));
  }
  return make_registry(std::move(names));
}

DifferentialForm darboux_alpha(const RegistryPtr& reg, int n) {
  DifferentialForm a = DifferentialForm::basis(reg, reg->name(0));
  for (int i = 0; i < n; ++i) {
    Symbol p = Symbol::variable(reg, reg->name(static_cast<std::size_t>(1 + n + i)));
    a -= p * DifferentialForm::basis(reg, reg->name(static_cast<std::size_t>(1 + i)));
  }
  return a;
}

}  // namespace

ContactChart::ContactChart(int n, std::vector<std::string> parameters)
    : n_(n), registry_(darboux_registry(n, std::move(parameters))), alpha_(darboux_alpha(registry_, n)) {}

ContactChart::ContactChart(RegistryPtr registry, int n, DifferentialForm alpha)
    : n_(n), registry_(std::move(registry)), alpha_(std::move(alpha)), darboux_(false) {
  if (n < 1 || registry_->size() < static_cast<std::size_t>(2 * n + 1))
    throw Error("registry too small for the requested chart dimension");
  if (!same_registry(alpha_.registry_ptr(), registry_)) throw RegistryMismatch("contact form over another registry");
  if (alpha_.degree() != 1) throw NotContact("contact form must be a one-form");
  darboux_ = alpha_ == darboux_alpha(registry_, n);
  if (volume_form().is_zero()) throw NotContact("alpha ^ (d alpha)^n vanishes identically");
}

Symbol ContactChart::u() const { return Symbol::variable(registry_, registry_->name(u_slot())); }
Symbol ContactChart::q(int i) const { return Symbol::variable(registry_, registry_->name(q_slot(i))); }
Symbol ContactChart::p(int i) const { return Symbol::variable(registry_, registry_->name(p_slot(i))); }
Symbol ContactChart::one() const { return Symbol(registry_, GaussianRational(1)); }

Symbol ContactChart::parse(std::string_view text) const { return parse_expr(text, registry_); }

Symbol ContactChart::adopt(const Symbol& s) const {
  if (s.depends_on(kLaurentVariable) || s.depends_on(kHbar))
    throw ForeignVariable("contact functions may not depend on w or hbar");
  return embed(s, registry_);
}

DifferentialForm ContactChart::volume_form() const {
  DifferentialForm da = exterior_derivative(alpha_);
  DifferentialForm vol = alpha_;
  for (int k = 0; k < n_; ++k) vol = wedge(vol, da);
  return vol;
}

// ---------------------------------------------------------------------------

namespace {

void require_darboux(const ContactChart& chart) {
  if (!chart.is_darboux()) throw NotContact("closed-form contact fields require the Darboux form du - p dq");
}

}  // namespace

ContactVectorField contact_vector_field(const Symbol& f_in, const ContactChart& chart) {
  require_darboux(chart);
  Symbol f = chart.adopt(f_in);
  const auto& reg = chart.registry();
  const int n = chart.n();
  VectorComponents v(reg->size(), chart.zero());
  Symbol fu = differentiate(f, chart.u_slot());
  Symbol vu = -f;
  for (int i = 0; i < n; ++i) {
    Symbol fp = differentiate(f, chart.p_slot(i));
    Symbol fq = differentiate(f, chart.q_slot(i));
    vu += chart.p(i) * fp;
    v[chart.q_slot(i)] = fp;
    v[chart.p_slot(i)] = -fq - chart.p(i) * fu;
  }
  v[chart.u_slot()] = vu;
  return ContactVectorField{std::move(v)};
}

std::optional<Symbol> conformal_factor(const ContactVectorField& v, const ContactChart& chart) {
  const DifferentialForm& alpha = chart.alpha();
  DifferentialForm lie = lie_derivative(v.components, alpha);
  // Find a slot where alpha has a unit (constant) coefficient to read g off.
  for (const auto& [idx, c] : alpha.terms()) {
    if (!c.is_constant()) continue;
    Symbol g = lie.coefficient(idx) * (GaussianRational(1) / c.constant_term());
    DifferentialForm rest = lie - g * alpha;
    if (rest.is_zero()) return g;
    return std::nullopt;
  }
  throw NotContact("contact form has no constant coefficient to normalize against");
}

Symbol hamiltonian_of(const ContactVectorField& v, const ContactChart& chart) {
  if (v.components.size() != chart.registry()->size())
    throw RegistryMismatch("vector field has wrong number of components");
  for (std::size_t k = chart.dimension(); k < v.components.size(); ++k)
    if (!v.components[k].is_zero()) throw NotContact("vector field moves a parameter");
  if (!conformal_factor(v, chart)) throw NotContact("vector field does not preserve the contact structure");
  DifferentialForm iv = interior(v.components, chart.alpha());
  return -iv.coefficient({});
}

Symbol lagrange_bracket(const Symbol& f_in, const Symbol& g_in, const ContactChart& chart) {
  require_darboux(chart);
  Symbol f = chart.adopt(f_in);
  Symbol g = chart.adopt(g_in);
  Symbol fu = differentiate(f, chart.u_slot());
  Symbol gu = differentiate(g, chart.u_slot());
  Symbol out = fu * g - f * gu;
  for (int i = 0; i < chart.n(); ++i) {
    Symbol fp = differentiate(f, chart.p_slot(i));
    Symbol gp = differentiate(g, chart.p_slot(i));
    Symbol fq = differentiate(f, chart.q_slot(i));
    Symbol gq = differentiate(g, chart.q_slot(i));
    out += chart.p(i) * (fp * gu - fu * gp);
    out += fp * gq - fq * gp;
  }
  return out;
}

Symbol lagrange_bracket_oracle(const Symbol& f, const Symbol& g, const ContactChart& chart) {
  ContactVectorField vf = contact_vector_field(f, chart);
  ContactVectorField vg = contact_vector_field(g, chart);
  ContactVectorField c{commutator(vf.components, vg.components)};
  return -interior(c.components, chart.alpha()).coefficient({});
}

Symbol generalized_leibniz_defect(const Symbol& f_in, const Symbol& g_in, const Symbol& h_in,
                                  const ContactChart& chart) {
  Symbol f = chart.adopt(f_in);
  Symbol g = chart.adopt(g_in);
  Symbol h = chart.adopt(h_in);
  return lagrange_bracket(f, g * h, chart) - lagrange_bracket(f, g, chart) * h - g * lagrange_bracket(f, h, chart) -
         lagrange_bracket(chart.one(), f, chart) * g * h;
}

std::vector<CommutationEntry> commutation_table(const ContactChart& chart) {
  if (chart.n() != 1) throw Error("the commutation table is defined on R^3 (n = 1)");
  auto named = [&](const std::string& name) { return name == "w" ? chart.one() : chart.parse(name); };
  struct Row {
    const char* l;
    const char* r;
    const char* published;
  };
  const Row rows[] = {{"p", "q", "w"}, {"w", "q", "0"}, {"w", "p", "0"},
                      {"u", "q", "0"}, {"u", "p", "p"}, {"u", "w", "w"}};
  std::vector<CommutationEntry> out;
  for (const auto& row : rows) {
    Symbol l = named(row.l);
    Symbol r = named(row.r);
    Symbol pub = named(row.published);
    Symbol computed = lagrange_bracket(l, r, chart);
    Symbol oracle = lagrange_bracket_oracle(l, r, chart);
    out.push_back({row.l, row.r, computed, oracle, row.published, computed == pub});
  }
  return out;
}

}  // namespace contactq
