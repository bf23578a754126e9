#include "see/cli/config_file.hpp"

#include <fstream>
#include <set>

#include "see/cli/formulas.hpp"
#include "see/errors.hpp"

namespace see::cli {

using nlohmann::json;

namespace {

template <class T>
T get(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

template <class T>
void maybe(const json& doc, const char* key, T& out, std::set<std::string>& used) {
  if (!doc.contains(key)) return;
  used.insert(key);
  out = get<T>(doc, key);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void resolve_tau(const json& doc, const std::string& prefix, std::uint64_t frequency, double& tau,
                 std::set<std::string>& used, std::vector<std::string>& notes) {
  const std::string direct = prefix + "tau_per_update";
  const std::string per_step = prefix + "tau_per_timestep";
  const bool has_direct = doc.contains(direct);
  const bool has_step = doc.contains(per_step);
  if (has_direct && has_step)
    throw ConfigError("config gives both '" + direct + "' and '" + per_step + "'");
  if (has_direct) {
    used.insert(direct);
    tau = get<double>(doc, direct.c_str());
  } else if (has_step) {
    used.insert(per_step);
    const double pt = get<double>(doc, per_step.c_str());
    tau = tau_from_per_timestep(pt, frequency);
    notes.push_back(direct + " = 1 - (1 - " + fmt_double(pt) + ")^" + std::to_string(frequency) +
                    " = " + fmt_double(tau));
  }
}

}  // namespace

ResolvedConfig resolve_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  std::set<std::string> used;
  trainer::Algorithm algorithm = trainer::Algorithm::see;
  std::string env = "cartpole";
  if (doc.contains("algorithm")) {
    algorithm = trainer::parse_algorithm(get<std::string>(doc, "algorithm"));
    used.insert("algorithm");
  }
  maybe(doc, "env", env, used);

  ResolvedConfig out;
  out.run = trainer::default_config(algorithm, env);
  auto& c = out.run;
  if (doc.contains("ablation")) {
    c.ablation = trainer::parse_ablation(get<std::string>(doc, "ablation"));
    used.insert("ablation");
  }
  maybe(doc, "seed", c.seed, used);
  maybe(doc, "total_steps", c.total_steps, used);
  maybe(doc, "warm_up_steps", c.warm_up_steps, used);
  maybe(doc, "update_frequency", c.update_frequency, used);
  maybe(doc, "hidden", c.hidden, used);
  maybe(doc, "gamma", c.gamma, used);
  maybe(doc, "batch_size", c.batch_size, used);
  maybe(doc, "gradient_clip", c.gradient_clip, used);
  maybe(doc, "replay_capacity", c.replay_capacity, used);
  maybe(doc, "learning_rate", c.learning_rate, used);
  maybe(doc, "epsilon_start", c.epsilon_start, used);
  maybe(doc, "epsilon_end", c.epsilon_end, used);
  maybe(doc, "epsilon_decay_steps", c.epsilon_decay_steps, used);
  maybe(doc, "value_function_batch", c.value_function_batch, used);
  maybe(doc, "value_function_capacity", c.value_function_capacity, used);
  maybe(doc, "explore_gamma", c.explore_gamma, used);
  maybe(doc, "explore_learning_rate", c.explore_learning_rate, used);
  maybe(doc, "probe_count", c.probe_count, used);
  maybe(doc, "probe_init_scale", c.probe_init_scale, used);
  maybe(doc, "mixture", c.mixture, used);
  maybe(doc, "eval_interval", c.eval_interval, used);
  maybe(doc, "eval_episodes", c.eval_episodes, used);

  resolve_tau(doc, "", c.update_frequency, c.tau, used, out.derivations);
  resolve_tau(doc, "explore_", c.update_frequency, c.explore_tau, used, out.derivations);

  if (doc.contains("explore_transition_batch")) {
    maybe(doc, "explore_transition_batch", c.explore_transition_batch, used);
  } else if (doc.contains("value_function_batch")) {
    c.explore_transition_batch = exploration_batch_split(c.batch_size, c.value_function_batch);
    out.derivations.push_back("explore_transition_batch = " + std::to_string(c.batch_size) + " / " +
                              std::to_string(c.value_function_batch) + " = " +
                              std::to_string(c.explore_transition_batch));
  }

  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (!key.empty() && key[0] == '_') continue;
    if (!used.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  c.validate();
  return out;
}

ResolvedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
  return resolve_config(doc);
}

json to_json(const trainer::RunConfig& c) {
  json j;
  j["env"] = c.env;
  j["algorithm"] = std::string(trainer::to_string(c.algorithm));
  j["ablation"] = std::string(trainer::to_string(c.ablation));
  j["seed"] = c.seed;
  j["total_steps"] = c.total_steps;
  j["warm_up_steps"] = c.warm_up_steps;
  j["update_frequency"] = c.update_frequency;
  j["hidden"] = c.hidden;
  j["gamma"] = c.gamma;
  j["batch_size"] = c.batch_size;
  j["gradient_clip"] = c.gradient_clip;
  j["replay_capacity"] = c.replay_capacity;
  j["learning_rate"] = c.learning_rate;
  j["tau_per_update"] = c.tau;
  j["epsilon_start"] = c.epsilon_start;
  j["epsilon_end"] = c.epsilon_end;
  j["epsilon_decay_steps"] = c.epsilon_decay_steps;
  j["explore_transition_batch"] = c.explore_transition_batch;
  j["value_function_batch"] = c.value_function_batch;
  j["value_function_capacity"] = c.value_function_capacity;
  j["explore_gamma"] = c.explore_gamma;
  j["explore_learning_rate"] = c.explore_learning_rate;
  j["explore_tau_per_update"] = c.explore_tau;
  j["probe_count"] = c.probe_count;
  j["probe_init_scale"] = c.probe_init_scale;
  j["mixture"] = c.mixture;
  j["eval_interval"] = c.eval_interval;
  j["eval_episodes"] = c.eval_episodes;
  return j;
}

bool same_config(const trainer::RunConfig& a, const trainer::RunConfig& b) {
  return to_json(a) == to_json(b);
}

}  // namespace see::cli
