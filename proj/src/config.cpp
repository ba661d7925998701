#include "burkholder/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "burkholder/suites.hpp"

namespace burkholder {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (cfg.has(key)) throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in);
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
  used_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::optional<double> Config::number(const std::string& key) const {
  used_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size() || !std::isfinite(v))
    throw ConfigError("config key '" + key + "': expected a number, got '" + it->second + "'");
  return v;
}

double Config::number(const std::string& key, double fallback) const { return number(key).value_or(fallback); }

std::uint64_t Config::u64(const std::string& key, std::uint64_t fallback) const {
  used_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    if (!it->second.empty() && it->second[0] != '-') v = std::stoull(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size())
    throw ConfigError("config key '" + key + "': expected a nonnegative integer, got '" + it->second + "'");
  return v;
}

std::size_t Config::count(const std::string& key, std::size_t fallback) const {
  return static_cast<std::size_t>(u64(key, fallback));
}

void Config::reject_unused() const {
  for (const auto& [key, value] : values_)
    if (!used_.count(key)) throw ConfigError("config key '" + key + "' is not used by this configuration");
}

namespace {

MatrixConfig matrix_config(const Config& c, const Loss& loss) {
  MatrixConfig m = MatrixConfig::standard(c.count("d1", 10), c.count("d2", 10), c.number("eta", 0.2),
                                          c.number("r", 1.0), c.number("L", loss.lipschitz()), loss.radius);
  m.c = c.number("c", m.c);
  m.instance_bound = c.number("R", 1.0);
  m.variance_weight = c.number("variance_weight", 0.5);
  m.validate();
  return m;
}

}  // namespace

Experiment build_experiment(const Config& c) {
  Experiment e;
  e.family = c.text("family", "matrix");
  const double radius = c.number("B", 1.0);
  e.loss = Loss::by_name(c.text("loss", e.family == "vaw" ? "squared" : "absolute"), radius);
  e.options.strategy = strategy_by_name(c.text("strategy", e.family == "vaw" ? "convex" : "linearized"));
  e.options.seed = c.u64("seed", 1);
  e.options.randomized.eps1 = c.number("eps1", 0.05);
  e.options.randomized.eps2 = c.number("eps2", 0.05);
  e.options.record_descent = c.text("record_descent", "false") == "true";

  auto& s = e.sequence;
  s.n = c.count("n", 500);
  s.seed = c.u64("sequence_seed", e.options.seed);
  s.radius = radius;
  s.noise = c.number("noise", 0.0);
  s.kind = harness::sequence_kind_by_name(
      c.text("sequence", e.family == "matrix" || e.family == "meta" ? "matrix_completion" : "random_vectors"));
  s.d1 = c.count("d1", 10);
  s.d2 = c.count("d2", 10);
  s.rank = c.count("rank", 1);
  s.nuclear_radius = c.number("planted_radius", c.number("r", 1.0));
  s.zipf = c.number("zipf", 0.0);
  s.d = c.count("d", 10);
  s.p = c.number("p", 2.0);
  s.norm_bound = c.number("norm_bound", 1.0);
  s.comparator_norm = c.number("comparator_norm", 1.0);
  s.steps = c.count("steps", 1);
  s.validate();

  e.oracle.iterations = c.count("oracle_iterations", 2000);
  e.oracle.step_scale = c.number("oracle_step", 0.5);
  e.grid_points = c.count("grid_points", 50);
  e.repetitions = c.count("repetitions", 20);
  e.tolerance = c.number("tolerance", 1e-6);
  e.comparator_radius = c.number("r", 1.0);

  if (e.family == "matrix") {
    e.potential = std::make_shared<MatrixPotential>(matrix_config(c, e.loss));
    e.comparator = ComparatorKind::nuclear_ball;
  } else if (e.family == "meta") {
    const MatrixConfig m = matrix_config(c, e.loss);
    e.potential = suites::make_meta(m, c.number("meta_eta", 0.1), s.n, e.options.seed);
    e.comparator = ComparatorKind::nuclear_ball;
  } else if (e.family == "param_free") {
    ParamFreeConfig pf = ParamFreeConfig::standard(s.n, s.d, s.p, c.number("c", 1.0), radius);
    pf.gamma = c.number("gamma", pf.gamma);
    pf.beta = c.number("beta", pf.beta);
    e.potential = std::make_shared<ParamFreePotential>(pf);
    e.comparator = ComparatorKind::grid;
  } else if (e.family == "adagrad") {
    AdaGradConfig a;
    a.d = s.d;
    const std::string variant = c.text("variant", "l2");
    if (variant != "l2" && variant != "linf") throw ConfigError("config key 'variant': expected l2 or linf");
    a.variant = variant == "l2" ? AdaGradVariant::l2 : AdaGradVariant::linf;
    a.lipschitz = c.number("L", e.loss.lipschitz());
    a.radius = radius;
    a.instance_bound = c.number("R", 1.0);
    a.validate();
    e.potential = std::make_shared<AdaGradPotential>(a);
    // The budget is for comparators in the unit ball of the dual norm.
    e.comparator = a.variant == AdaGradVariant::l2 ? ComparatorKind::l2_ball : ComparatorKind::linf_ball;
    e.comparator_radius = 1.0;
  } else if (e.family == "vaw") {
    VawConfig v = VawConfig::squared_loss(s.d, radius, c.number("lambda", 1.0));
    v.rho = c.number("rho", v.rho);
    v.lipschitz = c.number("L", v.lipschitz);
    v.c = c.number("c", v.c);
    e.potential = std::make_shared<VawPotential>(v);
    e.comparator = ComparatorKind::grid;
  } else {
    throw ConfigError("config key 'family': unknown family '" + e.family +
                      "' (expected matrix, meta, param_free, adagrad or vaw)");
  }
  if (e.options.strategy == StrategyKind::linearized && !e.potential->decomposes())
    throw ConfigError("strategy linearized is not applicable to family " + e.family + " (use convex or randomized)");
  if (e.loss.lipschitz() > e.potential->lipschitz() * (1.0 + 1e-12))
    throw ConfigError("loss " + e.loss.name() + " has Lipschitz constant above the potential's L");
  const bool matrix_family = e.family == "matrix" || e.family == "meta";
  if (matrix_family != (s.kind == harness::SequenceKind::matrix_completion))
    throw ConfigError("sequence " + harness::to_string(s.kind) + " does not fit family " + e.family);
  if (!matrix_family && s.d != e.potential->anchor_instance().size())
    throw ConfigError("dimension d disagrees with the potential");
  c.reject_unused();
  return e;
}

}  // namespace burkholder
