/*
Copyright 2026 The hpdiss Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "hpdiss/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hpdiss {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

// Reads a section of the tree and tracks which keys were consumed so that
// typos surface as errors instead of silently falling back to defaults.
class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  bool has(const std::string& key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

  std::optional<std::string> text(const std::string& key) {
    if (!has(key)) return std::nullopt;
    used_.insert(key);
    return trim(tree_->find(key)->second.data());
  }

  std::string field(const std::string& key) const { return name_ + "." + key; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(field(key), 0, "invalid " + field(key) + ": " + what);
  }

  double number(const std::string& key, double fallback, const ParameterMap& params) {
    auto t = text(key);
    if (!t) return fallback;
    return eval_constant(key, *t, params);
  }

  double eval_constant(const std::string& key, const std::string& t, const ParameterMap& params) {
    if (t.empty()) fail(key, "empty value");
    try {
      const double v = parse(t, {}, params).eval({});
      if (!std::isfinite(v)) fail(key, "value is not finite");
      return v;
    } catch (const ParseError& e) {
      fail(key, e.what());
    }
  }

  Vector vector(const std::string& key, const ParameterMap& params) {
    auto t = text(key);
    if (!t) fail(key, "missing");
    const auto items = split_list(*t);
    Vector v(static_cast<Eigen::Index>(items.size()));
    for (std::size_t i = 0; i < items.size(); ++i)
      v[static_cast<Eigen::Index>(i)] = eval_constant(key, items[i], params);
    return v;
  }

  void check_unused() const {
    if (!tree_) return;
    for (const auto& [k, v] : *tree_)
      if (!used_.count(k)) throw ConfigError(field(k), 0, "unknown key " + field(k));
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
  std::set<std::string> used_;
};

const pt::ptree* child(const pt::ptree& root, const std::string& name) {
  auto it = root.find(name);
  return it == root.not_found() ? nullptr : &it->second;
}

bool parse_bool(Section& s, const std::string& key, bool fallback) {
  auto t = s.text(key);
  if (!t) return fallback;
  if (*t == "on" || *t == "true" || *t == "yes" || *t == "1") return true;
  if (*t == "off" || *t == "false" || *t == "no" || *t == "0") return false;
  s.fail(key, "expected on/off, got '" + *t + "'");
}

Expr parse_expr(Section& s, const std::string& key, const std::string& text,
                const std::vector<std::string>& vars, const ParameterMap& params) {
  try {
    return parse(text, vars, params);
  } catch (const ParseError& e) {
    s.fail(key, e.what());
  }
}

RunConfig from_tree(const pt::ptree& root, const std::filesystem::path& base_dir,
                    const std::string& name) {
  static const std::set<std::string> known{"parameters", "system",   "initial", "integrator",
                                           "analysis",   "verify",   "output"};
  for (const auto& [k, v] : root) {
    if (!known.count(k))
      throw ConfigError(k, 0, "unknown section [" + k + "]");
  }

  RunConfig cfg;
  cfg.name = name;
  cfg.base_dir = base_dir;

  Section params(child(root, "parameters"), "parameters");
  if (const pt::ptree* p = child(root, "parameters")) {
    for (const auto& [k, v] : *p) cfg.parameters[k] = params.number(k, 0.0, cfg.parameters);
  }

  // [system]
  Section sys(child(root, "system"), "system");
  if (!child(root, "system")) throw ConfigError("system", 0, "missing section [system]");
  const auto preset = sys.text("preset");
  const bool inline_mode = sys.has("hamiltonian") || sys.has("variables") || sys.has("casimir");
  if (preset && inline_mode)
    sys.fail("preset", "give either a preset or an inline system, not both");
  cfg.dissipation = parse_bool(sys, "dissipation", true) ? Dissipation::On : Dissipation::Off;

  if (preset) {
    if (*preset == "rigid_body.case1")
      cfg.preset = rigid_body::CaseId::I;
    else if (*preset == "rigid_body.case2")
      cfg.preset = rigid_body::CaseId::II;
    else if (*preset == "rigid_body.case3")
      cfg.preset = rigid_body::CaseId::III;
    else
      sys.fail("preset", "unknown preset '" + *preset +
                             "' (expected rigid_body.case1, rigid_body.case2 or rigid_body.case3)");
    const Vector in = sys.vector("inertia", cfg.parameters);
    if (in.size() != 3) sys.fail("inertia", "expected three moments of inertia");
    cfg.inertia = {in[0], in[1], in[2]};
    try {
      cfg.inertia.validate();
    } catch (const std::invalid_argument& e) {
      sys.fail("inertia", e.what());
    }
    for (const auto& [k, v] : cfg.inertia.parameters()) {
      if (cfg.parameters.count(k)) sys.fail("inertia", "parameter " + k + " is reserved by the preset");
      cfg.parameters[k] = v;
    }
    if (sys.has("m0")) {
      cfg.m0 = sys.number("m0", 0.0, cfg.parameters);
      if (cfg.parameters.count("M0")) sys.fail("m0", "parameter M0 is also set in [parameters]");
      cfg.parameters["M0"] = cfg.m0;
    } else if (auto it = cfg.parameters.find("M0"); it != cfg.parameters.end()) {
      cfg.m0 = it->second;
    }
    if (*cfg.preset == rigid_body::CaseId::III && cfg.m0 == 0.0)
      sys.fail("m0", "rigid_body.case3 needs a nonzero m0");
    auto rc = rigid_body::make_case(cfg.inertia, *cfg.preset, cfg.m0, cfg.dissipation);
    cfg.variables = rc.system->variables();
    cfg.hamiltonian_text =
        rc.system->hamiltonian().expr().to_string(cfg.variables);
    cfg.casimir_text = rc.casimir.expr().to_string(cfg.variables);
    cfg.rigid = std::make_shared<const rigid_body::RigidBodyCase>(rc);
    cfg.field = std::make_shared<const DissipatedField>(rc.field);
  } else {
    const auto vars = sys.text("variables");
    if (!vars) sys.fail("variables", "missing (inline systems name their state variables)");
    cfg.variables = split_list(*vars);
    std::set<std::string> seen;
    for (const auto& v : cfg.variables) {
      if (v.empty()) sys.fail("variables", "empty variable name");
      if (!seen.insert(v).second) sys.fail("variables", "duplicate variable '" + v + "'");
      if (cfg.parameters.count(v)) sys.fail("variables", "'" + v + "' is also a parameter");
    }
    const std::size_t n = cfg.variables.size();
    const auto h = sys.text("hamiltonian");
    if (!h || h->empty()) sys.fail("hamiltonian", "missing Hamiltonian expression");
    const auto c = sys.text("casimir");
    if (!c || c->empty()) sys.fail("casimir", "missing Casimir expression");
    cfg.hamiltonian_text = *h;
    cfg.casimir_text = *c;
    ScalarField hf(parse_expr(sys, "hamiltonian", *h, cfg.variables, cfg.parameters), n);
    ScalarField cf(parse_expr(sys, "casimir", *c, cfg.variables, cfg.parameters), n);
    std::vector<std::vector<Expr>> pi(n, std::vector<Expr>(n, Expr::constant(0.0)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::string key = "pi_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
        if (auto t = sys.text(key)) pi[i][j] = parse_expr(sys, key, *t, cfg.variables, cfg.parameters);
      }
    auto system = std::make_shared<const PoissonSystem>(cfg.variables, std::move(pi), hf,
                                                        std::vector<ScalarField>{cf});
    cfg.field = std::make_shared<const DissipatedField>(system, cf, cfg.dissipation);
  }
  sys.check_unused();

  // [initial]
  Section init(child(root, "initial"), "initial");
  cfg.x0 = init.vector("state", cfg.parameters);
  if (static_cast<std::size_t>(cfg.x0.size()) != cfg.variables.size())
    init.fail("state", "expected " + std::to_string(cfg.variables.size()) + " components, got " +
                           std::to_string(cfg.x0.size()));
  init.check_unused();

  // [integrator]
  Section integ(child(root, "integrator"), "integrator");
  if (!integ.has("t_end")) integ.fail("t_end", "missing");
  cfg.integrator.t_end = integ.number("t_end", 0.0, cfg.parameters);
  if (!(cfg.integrator.t_end > 0.0)) integ.fail("t_end", "must be positive");
  cfg.integrator.rel_tol = integ.number("rel_tol", 1e-10, cfg.parameters);
  if (!(cfg.integrator.rel_tol > 0.0)) integ.fail("rel_tol", "must be positive");
  cfg.integrator.abs_tol = integ.number("abs_tol", 1e-10, cfg.parameters);
  if (!(cfg.integrator.abs_tol > 0.0)) integ.fail("abs_tol", "must be positive");
  cfg.integrator.sample_interval =
      integ.number("sample_interval", cfg.integrator.t_end / 2000.0, cfg.parameters);
  if (!(cfg.integrator.sample_interval > 0.0)) integ.fail("sample_interval", "must be positive");
  cfg.t_end_max = integ.number("t_end_max", cfg.integrator.t_end, cfg.parameters);
  if (cfg.t_end_max < cfg.integrator.t_end) integ.fail("t_end_max", "must be at least t_end");
  integ.check_unused();

  // [analysis]
  Section an(child(root, "analysis"), "analysis");
  if (auto psi = an.text("psi")) {
    cfg.psi_text = *psi;
    static const std::vector<std::string> hc{"H", "C"};
    cfg.psi = ScalarField(parse_expr(an, "psi", *psi, hc, cfg.parameters), 2);
  }
  if (an.has("equilibrium")) {
    cfg.equilibrium = an.vector("equilibrium", cfg.parameters);
    if (static_cast<std::size_t>(cfg.equilibrium->size()) != cfg.variables.size())
      an.fail("equilibrium", "dimension does not match the system");
  }
  if (cfg.psi && !cfg.equilibrium) an.fail("equilibrium", "a certificate needs an equilibrium");
  if (auto b = an.text("limit_branch")) {
    if (*b == "+" || *b == "+1" || *b == "1")
      cfg.limit_branch = 1;
    else if (*b == "-" || *b == "-1")
      cfg.limit_branch = -1;
    else
      an.fail("limit_branch", "expected + or -");
    if (!cfg.rigid || cfg.rigid->id == rigid_body::CaseId::III)
      an.fail("limit_branch", "closed-form limits exist only for rigid_body.case1 and case2");
  }
  cfg.detect_convergence = parse_bool(an, "detect_convergence", true);
  cfg.convergence_eps = an.number("convergence_eps", 1e-4, cfg.parameters);
  if (!(cfg.convergence_eps > 0.0)) an.fail("convergence_eps", "must be positive");
  cfg.convergence_window = an.number("convergence_window", 0.1, cfg.parameters);
  if (!(cfg.convergence_window > 0.0 && cfg.convergence_window < 1.0))
    an.fail("convergence_window", "must be a fraction in (0, 1)");
  an.check_unused();

  // [verify]
  Section ver(child(root, "verify"), "verify");
  const double samples = ver.number("samples", 1000, cfg.parameters);
  if (!(samples >= 1.0) || samples != std::floor(samples)) ver.fail("samples", "must be a positive integer");
  cfg.verify_samples = static_cast<std::size_t>(samples);
  cfg.verify_box = ver.number("box", 1.0, cfg.parameters);
  if (!(cfg.verify_box > 0.0)) ver.fail("box", "must be positive");
  const double seed = ver.number("seed", 1, cfg.parameters);
  if (seed < 0 || seed != std::floor(seed)) ver.fail("seed", "must be a non-negative integer");
  cfg.verify_seed = static_cast<std::uint64_t>(seed);
  ver.check_unused();

  // [output]
  Section out(child(root, "output"), "output");
  if (auto d = out.text("directory")) {
    if (d->empty()) out.fail("directory", "empty path");
    cfg.output_dir = *d;
  }
  if (auto t = out.text("trajectory")) cfg.trajectory_file = *t;
  if (auto t = out.text("report")) cfg.report_file = *t;
  if (auto t = out.text("plot_prefix")) cfg.plot_prefix = *t;
  cfg.write_files = parse_bool(out, "write", true);
  out.check_unused();
  return cfg;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                       const std::string& name) {
  pt::ptree root;
  std::istringstream in(text);
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", e.line(),
                      "config parse error at line " + std::to_string(e.line()) + ": " + e.message());
  }
  return from_tree(root, base_dir, name);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  try {
    return parse_config(buf.str(), dir, path.stem().string());
  } catch (const ConfigError& e) {
    throw ConfigError(e.field(), e.line(), path.string() + ": " + e.what());
  }
}

}  // namespace hpdiss
