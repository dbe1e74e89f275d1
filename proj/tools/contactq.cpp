// contactq command-line tool.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "contactq/characteristics.hpp"
#include "contactq/contact.hpp"
#include "contactq/errors.hpp"
#include "contactq/io.hpp"
#include "contactq/parser.hpp"
#include "contactq/quantize.hpp"
#include "contactq/sphere.hpp"
#include "contactq/thermo.hpp"

using namespace contactq;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::vector<double> parse_numbers(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw UsageError(flag + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::map<std::string, double> parse_bindings(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& it : items) {
    auto eq = it.find('=');
    if (eq == std::string::npos) throw UsageError("--bind: expected name=value, got '" + it + "'");
    out[it.substr(0, eq)] = parse_numbers(it.substr(eq + 1), "--bind").at(0);
  }
  return out;
}

std::string fmt(double v) {
  if (v == 0) v = 0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

json graded(const Symbol& s, const QuantumChart& qc, int order) {
  json out = json::array();
  const std::size_t slot = s.registry().slot(kHbar);
  const int top = std::min(order, s.is_zero() ? 0 : s.max_degree(slot));
  for (int k = 0; k <= top; ++k) {
    Symbol c = hbar_coefficient(s, k, qc);
    out.push_back({{"hbar_order", k}, {"coefficient", symbol_to_json(c)}, {"text", to_string(c)}});
  }
  return out;
}

// ---- subcommands -------------------------------------------------------------

struct Options {
  int n = 1;
  // bracket / star
  std::string f, g;
  std::vector<std::string> params;
  int order = -1;
  // flow
  std::string from;
  double t = 0, step = 1e-3;
  std::vector<std::string> binds;
  // rays
  std::string metric, boundary;
  double k = 1, seed = 1;
  // thermo
  std::string config, grid, picture, summary;
  // sphere
  std::string structure, harmonic;
  int cutoff = 0;
};

int cmd_bracket(const Options& o) {
  ContactChart chart(o.n, o.params);
  Symbol f = chart.parse(o.f), g = chart.parse(o.g);
  Symbol closed = lagrange_bracket(f, g, chart);
  Symbol oracle = lagrange_bracket_oracle(f, g, chart);
  emit({{"F", symbol_to_json(f)},
        {"G", symbol_to_json(g)},
        {"bracket", symbol_to_json(closed)},
        {"oracle", symbol_to_json(oracle)},
        {"agree", closed == oracle},
        {"text", to_string(closed)}});
  return 0;
}

int cmd_flow(const Options& o) {
  auto bindings = parse_bindings(o.binds);
  std::vector<std::string> names;
  for (const auto& [k, v] : bindings) names.push_back(k);
  ContactChart chart(o.n, names);
  auto x = parse_numbers(o.from, "--from");
  if (x.size() != static_cast<std::size_t>(2 * o.n + 1))
    throw UsageError("--from: expected " + std::to_string(2 * o.n + 1) + " values u,q..,p..");
  ContactPoint x0;
  x0.u = x[0];
  x0.q.assign(x.begin() + 1, x.begin() + 1 + o.n);
  x0.p.assign(x.begin() + 1 + o.n, x.end());
  auto h = NumericHamiltonian::from_symbol(chart.parse(o.f), chart, bindings);
  write_trajectory_csv(std::cout, flow(h, x0, o.t, o.step));
  return 0;
}

int cmd_rays(const Options& o) {
  json mj = read_json_file(o.metric);
  if (!mj.is_object() || !mj.contains("metric") || mj.size() != 1) throw InputError("metric file needs exactly {\"metric\": [[...]]}");
  const auto& rows = mj.at("metric");
  const int n = static_cast<int>(rows.size());
  if (n < 1) throw InputError("metric must be non-empty");
  ContactChart chart(n);
  std::vector<std::vector<Symbol>> g;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw InputError("metric must be square");
    g.emplace_back();
    for (const auto& v : row) g.back().push_back(v.is_string() ? chart.parse(v.get<std::string>()) : chart.parse(v.dump()));
  }

  json bj = read_json_file(o.boundary);
  if (!bj.is_object() || !bj.contains("samples") || bj.size() != 1) throw InputError("boundary file needs exactly {\"samples\": [...]}");
  std::vector<BoundarySample> samples;
  for (const auto& s : bj.at("samples")) {
    for (const auto& [key, v] : s.items())
      if (key != "q" && key != "u" && key != "normal" && key != "tangential_p")
        throw InputError("unknown boundary key '" + key + "'");
    BoundarySample b;
    b.q = s.at("q").get<std::vector<double>>();
    b.u = s.value("u", 0.0);
    b.normal = s.at("normal").get<std::vector<double>>();
    if (s.contains("tangential_p")) b.tangential_p = s.at("tangential_p").get<std::vector<double>>();
    if (b.q.size() != static_cast<std::size_t>(n) || b.normal.size() != static_cast<std::size_t>(n))
      throw InputError("boundary sample dimension does not match the metric");
    samples.push_back(std::move(b));
  }

  FanOptions opt;
  opt.t_end = o.t;
  opt.step = o.step;
  opt.seed = o.seed;
  auto fan = solve_characteristic_pde(NumericHamiltonian::eikonal(chart, g, o.k), samples, opt);

  std::cout << "ray,t,u";
  for (int i = 1; i <= n; ++i) std::cout << ",q" << i;
  for (int i = 1; i <= n; ++i) std::cout << ",p" << i;
  std::cout << ",residual\n";
  for (std::size_t r = 0; r < fan.rays.size(); ++r) {
    const auto& tr = fan.rays[r];
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
      const auto& s = tr.states[k];
      std::cout << r << ',' << fmt(tr.times[k]) << ',' << fmt(s.u);
      for (double v : s.q) std::cout << ',' << fmt(v);
      for (double v : s.p) std::cout << ',' << fmt(v);
      std::cout << ',' << fmt(tr.residuals[k]) << '\n';
    }
  }
  return 0;
}

int cmd_thermo(const Options& o) {
  json cfg = read_json_file(o.config);
  if (!cfg.is_object()) throw InputError("thermo config must be a JSON object");
  for (const auto& [key, v] : cfg.items())
    if (key != "substance" && key != "nR" && key != "b") throw InputError("unknown config key '" + key + "'");
  const std::string substance = cfg.value("substance", std::string("ideal-gas"));
  const double nR = cfg.value("nR", 1.0);
  FundamentalRelation rel = [&] {
    if (substance == "ideal-gas") {
      if (cfg.contains("b")) throw InputError("'b' only applies to shifted-volume");
      return FundamentalRelation::ideal_gas(nR);
    }
    if (substance == "shifted-volume") return FundamentalRelation::shifted_volume(nR, cfg.value("b", 0.0));
    throw InputError("unknown substance '" + substance + "' (ideal-gas, shifted-volume)");
  }();
  ThermoGrid grid = parse_grid(o.grid);
  LegendreMap m = legendre_submanifold(rel, grid);
  const double residual = first_law_residual(m);
  const double maxwell = maxwell_defect(rel, grid);

  json summary{{"substance", substance},
               {"nR", nR},
               {"grid", {{"U", {grid.U0, grid.U1, grid.nU}}, {"V", {grid.V0, grid.V1, grid.nV}}}},
               {"rows", m.states.size()},
               {"first_law_residual", residual},
               {"maxwell_defect", maxwell}};

  if (o.picture.empty()) {
    write_thermo_csv(std::cout, m);
  } else {
    Picture target{};
    try {
      target = parse_picture(o.picture);
    } catch (const DomainError& e) {
      throw UsageError(std::string("--picture: ") + e.what() + " (S, U, U-PV, U-TS, U-TS-PV or entropy, energy, enthalpy, helmholtz, gibbs)");
    }
    PictureMap pm = switch_potential(m, target);
    auto base = picture_base(pm.picture);
    std::cout << base[0] << ',' << base[1] << ',' << picture_name(pm.picture) << ",d_" << base[0] << ",d_" << base[1]
              << '\n';
    for (const auto& s : pm.samples)
      std::cout << fmt(s.x[0]) << ',' << fmt(s.x[1]) << ',' << fmt(s.potential) << ',' << fmt(s.c[0]) << ','
                << fmt(s.c[1]) << '\n';
    summary["picture"] = picture_name(pm.picture);
    summary["picture_residual"] = first_law_residual(pm);
  }
  if (!o.summary.empty()) {
    std::ofstream out(o.summary);
    if (!out) throw UsageError("cannot write '" + o.summary + "'");
    out << summary.dump(2) << "\n";
  }
  std::cerr << "first_law_residual=" << fmt(residual) << "\n";
  return 0;
}

int cmd_star(const Options& o) {
  QuantumChart qc(o.n, o.params);
  Symbol f = qc.parse(o.f), g = qc.parse(o.g);
  Symbol lifted = moyal(lift(f, qc), lift(g, qc), qc);
  Symbol restricted = restricted_star(f, g, qc);
  const int order = o.order < 0 ? 1 << 20 : o.order;
  emit({{"F", symbol_to_json(f)},
        {"G", symbol_to_json(g)},
        {"order", o.order < 0 ? json(nullptr) : json(o.order)},
        {"lifted", graded(lifted, qc, order)},
        {"restricted", graded(restricted, qc, order)},
        {"lifted_product", to_string(lifted)},
        {"restricted_product", to_string(restricted)}});
  return 0;
}

int cmd_sphere(const Options& o) {
  AmbientStructure s = structure_from_json(read_json_file(o.structure));
  json hj = read_json_file(o.harmonic);
  if (!hj.is_object() || !hj.contains("F")) throw InputError("harmonic file needs {\"F\": expr, \"G\": expr (optional)}");
  for (const auto& [key, v] : hj.items())
    if (key != "F" && key != "G") throw InputError("unknown harmonic key '" + key + "'");
  auto f = HarmonicExpansion::reduce(parse_expr(hj.at("F").get<std::string>(), s.registry()));
  auto g = HarmonicExpansion::reduce(parse_expr(hj.value("G", std::string("1")), s.registry()));

  FockOp op = sphere_operator(f, s, o.cutoff);
  CommutatorReport rep = commutator_report(f, g, s, o.cutoff);
  emit({{"structure", {{"n", s.n()}, {"frequencies", s.frequencies()}}},
        {"cutoff", o.cutoff},
        {"F", harmonic_to_json(f)},
        {"operator", fock_to_json(op)},
        {"hermitian", op.is_hermitian()},
        {"commutator_report",
         {{"G", harmonic_to_json(g)},
          {"bracket", harmonic_to_json(rep.bracket)},
          {"interior_max_occupation", o.cutoff / 2},
          {"interior_defect", rep.interior_defect},
          {"full_defect", std::isnan(rep.full_defect) ? json(nullptr) : json(rep.full_defect)}}}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contact geometry and quantization toolkit"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--n", o.n, "number of (q, p) pairs")->check(CLI::Range(1, 16));

  auto* bracket = app.add_subcommand("bracket", "Lagrange bracket of two expressions (JSON)");
  bracket->add_option("F", o.f)->required();
  bracket->add_option("G", o.g)->required();
  bracket->add_option("--params", o.params, "extra constant symbols")->delimiter(',');

  auto* flowc = app.add_subcommand("flow", "integrate the contact flow of F (CSV)");
  flowc->add_option("F", o.f)->required();
  flowc->add_option("--from", o.from, "initial point u,q1..qn,p1..pn")->required();
  flowc->add_option("--t", o.t, "end time")->required();
  flowc->add_option("--step", o.step, "RK4 step")->check(CLI::PositiveNumber);
  flowc->add_option("--bind", o.binds, "parameter binding name=value");

  auto* rays = app.add_subcommand("rays", "characteristic fan of the eikonal equation (CSV)");
  rays->add_option("--metric", o.metric, "JSON file {\"metric\": [[expr..]..]}")->required();
  rays->add_option("--k", o.k, "wave number")->required();
  rays->add_option("--boundary", o.boundary, "JSON file {\"samples\": [...]}")->required();
  rays->add_option("--t", o.t, "ray length")->default_val(1.0);
  rays->add_option("--step", o.step, "RK4 step")->check(CLI::PositiveNumber);
  rays->add_option("--seed", o.seed, "initial transverse momentum; its sign picks the branch");

  auto* thermo = app.add_subcommand("thermo", "Legendre submanifold samples (CSV)");
  thermo->add_option("--config", o.config, "JSON file {\"substance\": .., \"nR\": ..}")->required();
  thermo->add_option("--grid", o.grid, "U0:U1:nU,V0:V1:nV")->required();
  thermo->add_option("--picture", o.picture, "potential picture to tabulate instead of U,V,S,T,P");
  thermo->add_option("--summary", o.summary, "write residuals as JSON to this file");

  auto* star = app.add_subcommand("star", "hbar-graded star product (JSON)");
  star->add_option("F", o.f)->required();
  star->add_option("G", o.g)->required();
  star->add_option("--order", o.order, "highest hbar order to report")->check(CLI::NonNegativeNumber);
  star->add_option("--params", o.params, "extra constant symbols")->delimiter(',');

  auto* sphere = app.add_subcommand("sphere", "Fock quantization of a sphere function (JSON)");
  sphere->add_option("--structure", o.structure, "JSON file {\"n\": .., \"omega\": [[..]]}")->required();
  sphere->add_option("--cutoff", o.cutoff, "occupation cutoff per mode")->required()->check(CLI::NonNegativeNumber);
  sphere->add_option("--harmonic", o.harmonic, "JSON file {\"F\": expr, \"G\": expr}")->required();

  auto usage = [&](const std::string& what) {
    std::cerr << "usage error: " << what << "\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return 1;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return usage(e.what());
  }

  try {
    if (*bracket) return cmd_bracket(o);
    if (*flowc) return cmd_flow(o);
    if (*rays) return cmd_rays(o);
    if (*thermo) return cmd_thermo(o);
    if (*star) return cmd_star(o);
    if (*sphere) return cmd_sphere(o);
  } catch (const UsageError& e) {
    return usage(e.what());
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const contactq::Error& e) {
    return usage(e.what());
  } catch (const json::exception& e) {
    return usage(std::string("malformed JSON input: ") + e.what());
  }
  return 1;
}
