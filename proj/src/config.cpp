#include "eht/config.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace eht {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  return h;
}

// Wraps one JSON object: typed reads with defaults, and a final check that
// every present key was consumed, so misspelled keys fail loudly.
class Section {
 public:
  Section(json obj, std::string name)
      : obj_(std::move(obj)), name_(std::move(name)) {
    if (!obj_.is_object()) {
      throw std::invalid_argument("config section '" + name_ + "' must be an object");
    }
  }

  template <typename T>
  T get(const char* key, T fallback) {
    seen_.insert(key);
    if (!obj_.contains(key)) return fallback;
    try {
      return obj_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw std::invalid_argument("config key '" + name_ + "." + key +
                                  "': " + e.what());
    }
  }

  bool has(const char* key) const { return obj_.contains(key); }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) {
        throw std::invalid_argument("unknown config key '" + name_ + "." + key + "'");
      }
    }
  }

 private:
  json obj_;
  std::string name_;
  std::set<std::string> seen_;
};

json section_or_empty(const json& root, const char* key) {
  return root.contains(key) ? root.at(key) : json::object();
}

void validate_names(const ExperimentConfig& cfg) {
  ensemble_from_name(cfg.ensemble);
  const AnsatzKind kind = ansatz_kind_from_name(cfg.ansatz);
  if (kind == AnsatzKind::custom) {
    throw std::invalid_argument("config cannot request the custom ansatz");
  }
  if (cfg.attachment != "larger_index" && cfg.attachment != "midpoint") {
    throw std::invalid_argument("unknown attachment '" + cfg.attachment + "'");
  }
  if (cfg.range != "long_range" && cfg.range != "nearest_neighbor") {
    throw std::invalid_argument("unknown coupling range '" + cfg.range + "'");
  }
  if (cfg.variant != "ising_xx" && cfg.variant != "exchange_xy") {
    throw std::invalid_argument("unknown model variant '" + cfg.variant + "'");
  }
  for (const std::string& c : cfg.corrections) {
    if (c != "k1" && c != "k2" && c != "k3" && c != "k4") {
      throw std::invalid_argument("unknown correction level '" + c + "'");
    }
  }
}

void validate_values(const ExperimentConfig& cfg) {
  if (cfg.n_sites < 1) throw std::invalid_argument("n_sites must be >= 1");
  if (cfg.n_settings < 1 || cfg.n_shots < 1) {
    throw std::invalid_argument("measurement budgets must be >= 1");
  }
  if (cfg.partition.empty()) throw std::invalid_argument("partition is empty");
  for (std::size_t i = 0; i < cfg.partition.size(); ++i) {
    if (cfg.partition[i] < 0 || cfg.partition[i] >= cfg.n_sites) {
      throw std::invalid_argument("partition site out of range");
    }
    if (i > 0 && cfg.partition[i] <= cfg.partition[i - 1]) {
      throw std::invalid_argument("partition sites must be ascending and distinct");
    }
  }
  if (cfg.state.kind == StatePrep::Kind::product &&
      static_cast<int>(cfg.state.pattern.size()) != cfg.n_sites) {
    throw std::invalid_argument("product pattern length must equal n_sites");
  }
  if (cfg.fit.max_iterations < 1) {
    throw std::invalid_argument("fit.max_iterations must be >= 1");
  }
  if (!(cfg.fit.convergence_tol > 0.0)) {
    throw std::invalid_argument("fit.convergence_tol must be > 0");
  }
  if (cfg.fit.restarts < 0) throw std::invalid_argument("fit.restarts must be >= 0");
}

}  // namespace

std::string state_kind_name(StatePrep::Kind kind) {
  switch (kind) {
    case StatePrep::Kind::ground: return "ground";
    case StatePrep::Kind::quench: return "quench";
    case StatePrep::Kind::thermal: return "thermal";
    case StatePrep::Kind::product: return "product";
  }
  throw std::invalid_argument("unknown state kind");
}

StatePrep::Kind state_kind_from_name(const std::string& name) {
  if (name == "ground") return StatePrep::Kind::ground;
  if (name == "quench") return StatePrep::Kind::quench;
  if (name == "thermal") return StatePrep::Kind::thermal;
  if (name == "product") return StatePrep::Kind::product;
  throw std::invalid_argument("unknown state kind: " + name);
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  Section top(root, "config");
  top.get<json>("model", json::object());
  top.get<json>("state", json::object());
  top.get<json>("partition", json::array());
  top.get<json>("budget", json::object());
  top.get<json>("ansatz", json::object());
  top.get<json>("fit", json::object());
  top.get<std::uint64_t>("seed", 1);
  top.finish();

  ExperimentConfig cfg;

  Section model(section_or_empty(root, "model"), "model");
  cfg.n_sites = model.get<int>("n_sites", cfg.n_sites);
  cfg.range = model.get<std::string>("range", cfg.range);
  cfg.eta = model.get<double>("eta", cfg.eta);
  cfg.j = model.get<double>("j", cfg.j);
  cfg.b = model.get<double>("b", cfg.b);
  cfg.variant = model.get<std::string>("variant", cfg.variant);
  model.finish();

  Section state(section_or_empty(root, "state"), "state");
  cfg.state.kind = state_kind_from_name(state.get<std::string>("kind", "ground"));
  cfg.state.t = state.get<double>("t", cfg.state.t);
  cfg.state.b_initial = state.get<double>("b_initial", cfg.state.b_initial);
  cfg.state.b_final = state.get<double>("b_final", cfg.state.b_final);
  cfg.state.beta = state.get<double>("beta", cfg.state.beta);
  cfg.state.pattern = state.get<std::string>("pattern", cfg.state.pattern);
  state.finish();

  if (root.contains("partition")) {
    try {
      cfg.partition = root.at("partition").get<std::vector<int>>();
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("config key 'partition': ") + e.what());
    }
  }

  Section budget(section_or_empty(root, "budget"), "budget");
  cfg.n_settings = budget.get<int>("n_settings", cfg.n_settings);
  cfg.n_shots = budget.get<std::uint64_t>("n_shots", cfg.n_shots);
  cfg.ensemble = budget.get<std::string>("ensemble", cfg.ensemble);
  budget.finish();

  Section ansatz(section_or_empty(root, "ansatz"), "ansatz");
  cfg.ansatz = ansatz.get<std::string>("kind", cfg.ansatz);
  cfg.attachment = ansatz.get<std::string>("attachment", cfg.attachment);
  cfg.corrections =
      ansatz.get<std::vector<std::string>>("corrections", cfg.corrections);
  ansatz.finish();

  Section fit(section_or_empty(root, "fit"), "fit");
  const std::string init =
      fit.get<std::string>("init", init_strategy_name(cfg.fit.init));
  cfg.fit.init = init_strategy_from_name(init);
  if (cfg.fit.init == InitStrategy::user) {
    throw std::invalid_argument("config files cannot carry a user start vector");
  }
  cfg.fit.max_iterations = fit.get<int>("max_iterations", cfg.fit.max_iterations);
  cfg.fit.gradient_mode = gradient_mode_from_name(
      fit.get<std::string>("gradient_mode", gradient_mode_name(cfg.fit.gradient_mode)));
  cfg.fit.convergence_tol = fit.get<double>("convergence_tol", cfg.fit.convergence_tol);
  cfg.fit.fit_depolarization =
      fit.get<bool>("fit_depolarization", cfg.fit.fit_depolarization);
  cfg.fit.init_p = fit.get<double>("init_p", cfg.fit.init_p);
  cfg.fit.restarts = fit.get<int>("restarts", cfg.fit.restarts);
  cfg.fit.restart_seed = fit.get<std::uint64_t>("restart_seed", cfg.fit.restart_seed);
  cfg.fit.restart_spread = fit.get<double>("restart_spread", cfg.fit.restart_spread);
  fit.finish();

  Section top_again(root, "config");  // seed read with full type checking
  cfg.seed = top_again.get<std::uint64_t>("seed", cfg.seed);

  validate_names(cfg);
  validate_values(cfg);
  return cfg;
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  json state = {{"kind", state_kind_name(cfg.state.kind)}};
  switch (cfg.state.kind) {
    case StatePrep::Kind::ground:
      break;
    case StatePrep::Kind::quench:
      state["t"] = cfg.state.t;
      state["b_initial"] = cfg.state.b_initial;
      state["b_final"] = cfg.state.b_final;
      break;
    case StatePrep::Kind::thermal:
      state["beta"] = cfg.state.beta;
      break;
    case StatePrep::Kind::product:
      state["pattern"] = cfg.state.pattern;
      break;
  }
  const json root = {
      {"model",
       {{"n_sites", cfg.n_sites},
        {"range", cfg.range},
        {"eta", cfg.eta},
        {"j", cfg.j},
        {"b", cfg.b},
        {"variant", cfg.variant}}},
      {"state", state},
      {"partition", cfg.partition},
      {"budget",
       {{"n_settings", cfg.n_settings},
        {"n_shots", cfg.n_shots},
        {"ensemble", cfg.ensemble}}},
      {"ansatz",
       {{"kind", cfg.ansatz},
        {"attachment", cfg.attachment},
        {"corrections", cfg.corrections}}},
      {"fit",
       {{"init", init_strategy_name(cfg.fit.init)},
        {"max_iterations", cfg.fit.max_iterations},
        {"gradient_mode", gradient_mode_name(cfg.fit.gradient_mode)},
        {"convergence_tol", cfg.fit.convergence_tol},
        {"fit_depolarization", cfg.fit.fit_depolarization},
        {"init_p", cfg.fit.init_p},
        {"restarts", cfg.fit.restarts},
        {"restart_seed", cfg.fit.restart_seed},
        {"restart_spread", cfg.fit.restart_spread}}},
      {"seed", cfg.seed}};
  return root.dump(2) + "\n";
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return config_from_json_text(buffer.str());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string config_hash(const ExperimentConfig& cfg) {
  // json objects keep keys sorted, so dump() is canonical.
  const std::string canonical = json::parse(config_to_json_text(cfg)).dump();
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << fnv1a(canonical);
  return out.str();
}

}  // namespace eht
