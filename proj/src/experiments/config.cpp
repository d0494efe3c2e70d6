#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <tomlplusplus/toml.hpp>

#include "pbigraph/error.hpp"
#include "pbigraph/experiments.hpp"

namespace pbg::exp {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::config, what); }

void check_keys(const toml::table& t, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : t) {
    (void)v;
    if (!allowed.count(std::string(k.str()))) bad("unknown key '" + std::string(k.str()) + "' in " + where);
  }
}

double get_double(const toml::node_view<const toml::node>& n, const std::string& key, double fallback) {
  if (!n) return fallback;
  auto v = n.value<double>();
  if (!v || !std::isfinite(*v)) bad("'" + key + "' must be a number");
  return *v;
}

long long get_int(const toml::node_view<const toml::node>& n, const std::string& key, long long fallback) {
  if (!n) return fallback;
  if (!n.is_integer()) bad("'" + key + "' must be an integer");
  return *n.value<long long>();
}

bool get_bool(const toml::node_view<const toml::node>& n, const std::string& key, bool fallback) {
  if (!n) return fallback;
  if (!n.is_boolean()) bad("'" + key + "' must be a boolean");
  return *n.value<bool>();
}

std::string get_string(const toml::node_view<const toml::node>& n, const std::string& key,
                       const std::string& fallback) {
  if (!n) return fallback;
  if (!n.is_string()) bad("'" + key + "' must be a string");
  return *n.value<std::string>();
}

template <class T>
std::vector<T> get_array(const toml::node_view<const toml::node>& n, const std::string& key) {
  const auto* arr = n.as_array();
  if (!arr) bad("'" + key + "' must be an array");
  std::vector<T> out;
  for (const auto& e : *arr) {
    if constexpr (std::is_same_v<T, std::string>) {
      auto v = e.template value<std::string>();
      if (!v) bad("'" + key + "' must hold strings");
      out.push_back(*v);
    } else if constexpr (std::is_floating_point_v<T>) {
      auto v = e.template value<double>();
      if (!v || !std::isfinite(*v)) bad("'" + key + "' must hold numbers");
      out.push_back(*v);
    } else {
      if (!e.is_integer()) bad("'" + key + "' must hold integers");
      out.push_back(static_cast<T>(*e.template value<long long>()));
    }
  }
  return out;
}

const toml::table* subtable(const toml::table& root, const char* name) {
  const auto* node = root.get(name);
  if (!node) return nullptr;
  if (!node->is_table()) bad(std::string("'") + name + "' must be a table");
  return node->as_table();
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::identities: return "identities";
    case Experiment::consistency: return "consistency";
    case Experiment::graph_consistency: return "graph-consistency";
    case Experiment::convergence: return "convergence";
    case Experiment::denoise: return "denoise";
    case Experiment::poincare: return "poincare";
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (auto e : {Experiment::identities, Experiment::consistency, Experiment::graph_consistency,
                 Experiment::convergence, Experiment::denoise, Experiment::poincare}) {
    if (to_string(e) == name) return e;
  }
  bad("unknown experiment '" + name + "'");
}

double EpsilonRule::operator()(long long n, std::size_t index) const {
  if (kind == Kind::explicit_list) {
    require(index < values.size(), ErrorCode::config, "epsilon_rule: fewer values than n_list entries");
    return values[index];
  }
  const double nn = static_cast<double>(n);
  return c * std::pow(std::log(nn) / nn, a);
}

Density DensitySpec::make(const BoxDomain& domain) const {
  if (kind == "uniform") return Density::uniform(domain);
  if (kind == "cosine") return Density::cosine(domain, amplitude, wavenumber, axis);
  bad("unknown density kind '" + kind + "'");
}

void ExperimentConfig::validate() const {
  const int d = domain.dim();
  const bool needs_n = experiment == Experiment::graph_consistency || experiment == Experiment::convergence ||
                       experiment == Experiment::denoise;
  if (needs_n && n_list.empty()) bad("n_list must not be empty for " + to_string(experiment));
  for (long long n : n_list)
    if (n < 2) bad("n_list entries must be >= 2");
  if (epsilon_rule.kind == EpsilonRule::Kind::power) {
    // eps_n must shrink slower than sqrt(delta_n) = (ln n / n)^{1/(2d)}.
    if (!(epsilon_rule.a > 0.0 && epsilon_rule.a < 1.0 / (2.0 * d)))
      bad("epsilon_rule exponent a must lie in (0, 1/(2d)) = (0, " + std::to_string(1.0 / (2.0 * d)) + ")");
    if (!(epsilon_rule.c > 0.0)) bad("epsilon_rule c must be > 0");
  } else {
    if (needs_n && epsilon_rule.values.size() != n_list.size())
      bad("explicit epsilon_rule needs one value per n_list entry");
    for (double e : epsilon_rule.values)
      if (!(e > 0.0)) bad("epsilon values must be > 0");
  }
  if (seeds.empty()) bad("seeds must not be empty");
  if (static_cast<int>(grid_shape.size()) != d) bad("grid_shape must have one entry per dimension");
  for (int s : grid_shape)
    if (s < 3) bad("grid_shape entries must be >= 3");
  if (!(p > 1.0)) bad("p must be > 1");
  if (!(lambda > 0.0)) bad("lambda must be > 0");
  for (double e : epsilons)
    if (!(e > 0.0)) bad("epsilons must be > 0");
  for (double q : p_list)
    if (!(q > 1.0)) bad("p_list entries must be > 1");
  if (!(noise >= 0.0)) bad("noise must be >= 0");
  if (identities.instances < 1 || identities.n_min < 10 || identities.n_max < identities.n_min)
    bad("identities: need instances >= 1 and 10 <= n_min <= n_max");
  if (threads < 1) bad("threads must be >= 1");
  if (output_dir.empty()) bad("output_dir must not be empty");
  try {
    solver.validate();
  } catch (const Error& e) {
    bad(std::string("solver: ") + e.what());
  }
}

ExperimentConfig parse_config(const std::string& text, std::optional<Experiment> experiment_override) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "TOML parse error: " << e.description() << " at line " << e.source().begin.line;
    bad(os.str());
  }
  check_keys(root,
             {"experiment", "domain", "density", "kernel", "radius", "p", "lambda", "n_list", "epsilon_rule",
              "seeds", "grid_shape", "output_dir", "threads", "solver", "identities", "consistency",
              "graph_consistency", "convergence", "denoise", "poincare"},
             "config");

  ExperimentConfig cfg;
  const toml::table& r = root;
  if (experiment_override) {
    cfg.experiment = *experiment_override;
  } else {
    const auto name = get_string(r["experiment"], "experiment", "");
    if (name.empty()) bad("missing 'experiment'");
    cfg.experiment = parse_experiment(name);
  }

  if (const auto* t = subtable(root, "domain")) {
    check_keys(*t, {"lo", "hi"}, "[domain]");
    const toml::table& dt = *t;
    if (!dt["lo"] || !dt["hi"]) bad("[domain] needs lo and hi");
    auto lo = get_array<double>(dt["lo"], "domain.lo");
    auto hi = get_array<double>(dt["hi"], "domain.hi");
    try {
      cfg.domain = BoxDomain(lo, hi);
    } catch (const Error& e) {
      bad(std::string("domain: ") + e.what());
    }
  }
  const int d = cfg.domain.dim();
  cfg.grid_shape.assign(static_cast<std::size_t>(d), 128);

  if (const auto* t = subtable(root, "density")) {
    check_keys(*t, {"kind", "amplitude", "wavenumber", "axis"}, "[density]");
    const toml::table& dt = *t;
    cfg.density.kind = get_string(dt["kind"], "density.kind", "uniform");
    cfg.density.amplitude = get_double(dt["amplitude"], "density.amplitude", 0.5);
    cfg.density.wavenumber = static_cast<int>(get_int(dt["wavenumber"], "density.wavenumber", 1));
    cfg.density.axis = static_cast<int>(get_int(dt["axis"], "density.axis", 0));
  } else if (r["density"].is_string()) {
    cfg.density.kind = *r["density"].value<std::string>();
  }
  try {
    (void)cfg.density.make(cfg.domain);
  } catch (const Error& e) {
    bad(std::string("density: ") + e.what());
  }

  // kernel = "name" with a top-level radius, or [kernel] name/radius.
  std::string kname = "indicator";
  double kradius = -1.0;
  if (const auto* node = root.get("kernel"); node && node->is_table()) {
    const toml::table& kt = *node->as_table();
    check_keys(kt, {"name", "radius"}, "[kernel]");
    kname = get_string(kt["name"], "kernel.name", kname);
    kradius = get_double(kt["radius"], "kernel.radius", -1.0);
  } else {
    kname = get_string(r["kernel"], "kernel", kname);
  }
  kradius = get_double(r["radius"], "radius", kradius);
  try {
    if (kradius < 0.0) kradius = kname == "truncated-linear" ? 2.0 : 1.0;
    cfg.kernel = Kernel::from_name(kname, kradius);
  } catch (const Error& e) {
    bad(std::string("kernel: ") + e.what());
  }

  cfg.p = get_double(r["p"], "p", cfg.p);
  cfg.lambda = get_double(r["lambda"], "lambda", cfg.lambda);
  if (r["n_list"]) cfg.n_list = get_array<long long>(r["n_list"], "n_list");
  if (r["seeds"]) cfg.seeds = get_array<std::uint64_t>(r["seeds"], "seeds");
  if (r["grid_shape"]) cfg.grid_shape = get_array<int>(r["grid_shape"], "grid_shape");
  cfg.output_dir = get_string(r["output_dir"], "output_dir", "out/" + to_string(cfg.experiment));
  cfg.threads = static_cast<unsigned>(get_int(r["threads"], "threads", 1));

  if (r["epsilon_rule"].is_array()) {
    cfg.epsilon_rule.kind = EpsilonRule::Kind::explicit_list;
    cfg.epsilon_rule.values = get_array<double>(r["epsilon_rule"], "epsilon_rule");
  } else if (const auto* t = subtable(root, "epsilon_rule")) {
    check_keys(*t, {"kind", "c", "a", "values"}, "[epsilon_rule]");
    const toml::table& et = *t;
    const auto kind = get_string(et["kind"], "epsilon_rule.kind", "power");
    if (kind == "power") {
      cfg.epsilon_rule.kind = EpsilonRule::Kind::power;
      cfg.epsilon_rule.c = get_double(et["c"], "epsilon_rule.c", 1.5);
      cfg.epsilon_rule.a = get_double(et["a"], "epsilon_rule.a", 0.2);
    } else if (kind == "explicit") {
      cfg.epsilon_rule.kind = EpsilonRule::Kind::explicit_list;
      if (!et["values"]) bad("explicit epsilon_rule needs values");
      cfg.epsilon_rule.values = get_array<double>(et["values"], "epsilon_rule.values");
    } else {
      bad("epsilon_rule.kind must be 'power' or 'explicit'");
    }
  }

  if (const auto* t = subtable(root, "solver")) {
    check_keys(*t, {"method", "tol", "max_iter", "tau", "continuation_steps"}, "[solver]");
    const toml::table& st = *t;
    try {
      cfg.solver.method = parse_solve_method(get_string(st["method"], "solver.method", "auto"));
    } catch (const Error& e) {
      bad(e.what());
    }
    cfg.solver.tol = get_double(st["tol"], "solver.tol", cfg.solver.tol);
    cfg.solver.max_iter = static_cast<int>(get_int(st["max_iter"], "solver.max_iter", cfg.solver.max_iter));
    cfg.solver.tau = get_double(st["tau"], "solver.tau", cfg.solver.tau);
    cfg.solver.continuation_steps =
        static_cast<int>(get_int(st["continuation_steps"], "solver.continuation_steps", cfg.solver.continuation_steps));
  }
  cfg.solver.p = cfg.p;
  cfg.solver.lambda = cfg.lambda;

  if (const auto* t = subtable(root, "identities")) {
    check_keys(*t, {"instances", "n_min", "n_max", "epsilon", "base_seed", "corrupt_weights"}, "[identities]");
    const toml::table& it = *t;
    auto& o = cfg.identities;
    o.instances = static_cast<int>(get_int(it["instances"], "identities.instances", o.instances));
    o.n_min = static_cast<int>(get_int(it["n_min"], "identities.n_min", o.n_min));
    o.n_max = static_cast<int>(get_int(it["n_max"], "identities.n_max", o.n_max));
    o.epsilon = get_double(it["epsilon"], "identities.epsilon", o.epsilon);
    o.base_seed = static_cast<std::uint64_t>(get_int(it["base_seed"], "identities.base_seed", 1000));
    o.corrupt_weights = get_bool(it["corrupt_weights"], "identities.corrupt_weights", false);
  }
  if (const auto* t = subtable(root, "consistency")) {
    check_keys(*t, {"epsilons", "interior_margin", "preset"}, "[consistency]");
    const toml::table& ct = *t;
    if (ct["epsilons"]) cfg.epsilons = get_array<double>(ct["epsilons"], "consistency.epsilons");
    cfg.interior_margin = get_double(ct["interior_margin"], "consistency.interior_margin", cfg.interior_margin);
    cfg.preset = get_string(ct["preset"], "consistency.preset", cfg.preset);
  }
  if (const auto* t = subtable(root, "graph_consistency")) {
    check_keys(*t, {"interior_margin", "negative_control", "preset"}, "[graph_consistency]");
    const toml::table& gt = *t;
    cfg.interior_margin = get_double(gt["interior_margin"], "graph_consistency.interior_margin", cfg.interior_margin);
    cfg.negative_control = get_bool(gt["negative_control"], "graph_consistency.negative_control", true);
    cfg.preset = get_string(gt["preset"], "graph_consistency.preset", cfg.preset);
  }
  if (const auto* t = subtable(root, "convergence")) {
    check_keys(*t, {"u_star"}, "[convergence]");
    const toml::table& ct = *t;
    cfg.preset = get_string(ct["u_star"], "convergence.u_star", cfg.preset);
  }
  if (const auto* t = subtable(root, "denoise")) {
    check_keys(*t, {"noise", "p_list", "u_star"}, "[denoise]");
    const toml::table& dt = *t;
    cfg.noise = get_double(dt["noise"], "denoise.noise", cfg.noise);
    if (dt["p_list"]) cfg.p_list = get_array<double>(dt["p_list"], "denoise.p_list");
    cfg.preset = get_string(dt["u_star"], "denoise.u_star", cfg.preset);
  }
  if (const auto* t = subtable(root, "poincare")) {
    check_keys(*t, {"epsilons", "presets", "bands"}, "[poincare]");
    const toml::table& pt = *t;
    if (pt["epsilons"]) cfg.epsilons = get_array<double>(pt["epsilons"], "poincare.epsilons");
    if (pt["presets"]) cfg.presets = get_array<std::string>(pt["presets"], "poincare.presets");
    if (const auto* bands = pt.get("bands")) {
      if (!bands->is_table()) bad("poincare.bands must be a table");
      for (const auto& [k, v] : *bands->as_table()) {
        const toml::node_view<const toml::node> view(&v);
        auto lohi = get_array<double>(view, "poincare.bands");
        if (lohi.size() != 2 || !(lohi[0] > 0.0 && lohi[0] <= lohi[1])) bad("poincare band must be [lo, hi]");
        cfg.poincare_bands.emplace_back(std::string(k.str()), std::make_pair(lohi[0], lohi[1]));
      }
    }
  }
  try {
    (void)AnalyticFunction::from_name(cfg.preset, cfg.domain);
  } catch (const Error& e) {
    bad(std::string("preset: ") + e.what());
  }
  for (const auto& name : cfg.presets) {
    try {
      (void)AnalyticFunction::from_name(name, cfg.domain);
    } catch (const Error& e) {
      bad(std::string("poincare preset: ") + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path, std::optional<Experiment> experiment_override) {
  std::ifstream is(path);
  if (!is) bad("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), experiment_override);
}

}  // namespace pbg::exp
