// jamlab: experiment driver for the radar / jammer frequency-selection game.
//
// Verbs:
//   solve <config>                 train per the config, write an artifact dir
//   exploitability <config> <pol>  exact exploitability of a dumped profile
//   eval <config> <polA> <polB>    match policy A (player 0) against B (player 1)
//   case <a|b|c|d> <config>        scenario case study with probe reporting
//   render <config> <history>      both seats' board views of a history
//   export <policy> <path>         canonical rewrite of a policy dump
//
// Every run is a pure function of (config bytes, seed): with timing "none"
// (the default) the emitted CSV, policy dump, config snapshot and summary are
// byte-identical across repetitions.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "jamlab/best_response.h"
#include "jamlab/cfr.h"
#include "jamlab/deep_cfr.h"
#include "jamlab/dqn.h"
#include "jamlab/eval.h"
#include "jamlab/features.h"
#include "jamlab/game.h"
#include "jamlab/kuhn.h"
#include "jamlab/radar_game.h"
#include "jamlab/rng.h"
#include "jamlab/tensor.h"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;
using namespace jamlab;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Strict config access: every key is either consumed by a getter or reported
// as unknown, with its dotted path, by finish().

class Section {
 public:
  Section(const Json& node, std::string path) : node_(&node), path_(std::move(path)) {
    if (!node_->is_object())
      throw CliError("config error: " + label() + " must be an object");
  }

  bool has(const char* key) const { return node_->contains(key); }

  double number(const char* key, double def) {
    const Json* v = take(key);
    if (v == nullptr) return def;
    if (!v->is_number()) fail(key, "a number");
    return v->get<double>();
  }

  int integer(const char* key, int def) {
    const Json* v = take(key);
    if (v == nullptr) return def;
    if (!v->is_number_integer()) fail(key, "an integer");
    return v->get<int>();
  }

  std::uint64_t unsigned64(const char* key, std::uint64_t def) {
    const Json* v = take(key);
    if (v == nullptr) return def;
    if (!v->is_number_integer() || (v->is_number_integer() && v->get<std::int64_t>() < 0))
      fail(key, "a nonnegative integer");
    return v->get<std::uint64_t>();
  }

  bool boolean(const char* key, bool def) {
    const Json* v = take(key);
    if (v == nullptr) return def;
    if (!v->is_boolean()) fail(key, "a boolean");
    return v->get<bool>();
  }

  std::string text(const char* key, const std::string& def) {
    const Json* v = take(key);
    if (v == nullptr) return def;
    if (!v->is_string()) fail(key, "a string");
    return v->get<std::string>();
  }

  std::string required_text(const char* key) {
    if (!has(key))
      throw CliError("config error: missing required key " + key_path(key));
    return text(key, "");
  }

  std::vector<int> int_list(const char* key, std::vector<int> def) {
    const Json* v = take(key);
    if (v == nullptr) return def;
    if (!v->is_array()) fail(key, "an array of integers");
    std::vector<int> out;
    for (const auto& item : *v) {
      if (!item.is_number_integer()) fail(key, "an array of integers");
      out.push_back(item.get<int>());
    }
    return out;
  }

  std::vector<double> number_list(const char* key, std::vector<double> def) {
    const Json* v = take(key);
    if (v == nullptr) return def;
    if (!v->is_array()) fail(key, "an array of numbers");
    std::vector<double> out;
    for (const auto& item : *v) {
      if (!item.is_number()) fail(key, "an array of numbers");
      out.push_back(item.get<double>());
    }
    return out;
  }

  Section child(const char* key) {
    static const Json empty = Json::object();
    const Json* v = take(key);
    return Section(v == nullptr ? empty : *v, key_path(key));
  }

  void finish() const {
    for (const auto& item : node_->items()) {
      if (used_.count(item.key()) == 0)
        throw CliError("config error: unknown key " + key_path(item.key()));
    }
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  std::string label() const { return path_.empty() ? "the top level" : path_; }

  const Json* take(const char* key) {
    used_.insert(key);
    if (!node_->contains(key)) return nullptr;
    return &(*node_)[key];
  }

  [[noreturn]] void fail(const char* key, const char* expected) const {
    throw CliError("config error: " + key_path(key) + " must be " + expected);
  }

  const Json* node_;
  std::string path_;
  std::set<std::string> used_;
};

Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw CliError("parse error in " + path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Experiment config.

struct GameSection {
  std::string type = "radar";  // radar | kuhn
  RadarGameConfig radar;
};

struct SolverSection {
  std::string type;  // tabular_cfr | deep_cfr | dqn; the one key with no default
  int cfr_iterations = 1000;
  bool linear_averaging = false;
  std::uint64_t history_gate = 5'000'000;
  DeepCfrConfig deep;
  DqnConfig dqn;
};

struct EvalSection {
  std::string mode = "exact";  // exact | sampled
  int episodes = 10000;
  int eval_every = 100;  // checkpoint cadence in solver indices; 0 = final only
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::string timing = "none";  // none | wall; wall breaks byte-reproducibility
  int policy_dump_samples = 256;
  GameSection game;
  SolverSection solver;
  EvalSection evaluation;
};

Scenario parse_scenario(const std::string& name, const std::string& path) {
  if (name == "free") return Scenario::kFree;
  if (name == "case_a") return Scenario::kCaseA;
  if (name == "case_b") return Scenario::kCaseB;
  if (name == "case_c") return Scenario::kCaseC;
  if (name == "case_d") return Scenario::kCaseD;
  throw CliError("config error: " + path +
                 " must be one of free, case_a, case_b, case_c, case_d");
}

std::string scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::kFree: return "free";
    case Scenario::kCaseA: return "case_a";
    case Scenario::kCaseB: return "case_b";
    case Scenario::kCaseC: return "case_c";
    case Scenario::kCaseD: return "case_d";
  }
  return "free";
}

PhysicsParams parse_physics(Section sec) {
  PhysicsParams p;
  p.transmit_power = sec.number("transmit_power", p.transmit_power);
  p.antenna_gain_db = sec.number("antenna_gain_db", p.antenna_gain_db);
  p.wavelength = sec.number("wavelength", p.wavelength);
  p.target_range = sec.number("target_range", p.target_range);
  p.system_temp = sec.number("system_temp", p.system_temp);
  p.subpulse_bandwidth = sec.number("subpulse_bandwidth", p.subpulse_bandwidth);
  p.spot_bandwidth = sec.number("spot_bandwidth", p.spot_bandwidth);
  p.noise_bandwidth = sec.number("noise_bandwidth", p.noise_bandwidth);
  p.jammer_power = sec.number("jammer_power", p.jammer_power);
  p.jammer_gain_db = sec.number("jammer_gain_db", p.jammer_gain_db);
  p.rcs = sec.number_list("rcs", p.rcs);
  p.pfa = sec.number("pfa", p.pfa);
  sec.finish();
  return p;
}

void require_positive(int value, const char* path) {
  if (value <= 0) throw CliError(std::string("config error: ") + path + " must be > 0");
}

ExperimentConfig parse_config(const Json& root) {
  Section top(root, "");
  ExperimentConfig cfg;
  cfg.seed = top.unsigned64("seed", cfg.seed);
  cfg.output_dir = top.text("output_dir", cfg.output_dir);
  cfg.timing = top.text("timing", cfg.timing);
  if (cfg.timing != "none" && cfg.timing != "wall")
    throw CliError("config error: timing must be none or wall");
  cfg.policy_dump_samples = top.integer("policy_dump_samples", cfg.policy_dump_samples);
  if (cfg.policy_dump_samples < 0)
    throw CliError("config error: policy_dump_samples must be >= 0");

  Section game = top.child("game");
  cfg.game.type = game.text("type", cfg.game.type);
  if (cfg.game.type != "radar" && cfg.game.type != "kuhn")
    throw CliError("config error: game.type must be radar or kuhn");
  RadarGameConfig& rc = cfg.game.radar;
  rc.num_pulses = game.integer("num_pulses", rc.num_pulses);
  rc.num_subpulses = game.integer("num_subpulses", rc.num_subpulses);
  rc.num_freqs = game.integer("num_freqs", rc.num_freqs);
  require_positive(rc.num_pulses, "game.num_pulses");
  require_positive(rc.num_subpulses, "game.num_subpulses");
  require_positive(rc.num_freqs, "game.num_freqs");
  rc.scenario = parse_scenario(game.text("scenario", "free"), "game.scenario");
  const std::string weights = game.text("case_a_weights", "uniform");
  if (weights == "uniform") {
    rc.case_a_weights = CaseAWeights::kUniform;
  } else if (weights == "rcs_inverse") {
    rc.case_a_weights = CaseAWeights::kRcsInverse;
  } else {
    throw CliError("config error: game.case_a_weights must be uniform or rcs_inverse");
  }
  rc.physics = parse_physics(game.child("physics"));
  game.finish();

  Section solver = top.child("solver");
  SolverSection& sv = cfg.solver;
  sv.type = solver.required_text("type");
  if (sv.type == "tabular_cfr") {
    sv.cfr_iterations = solver.integer("iterations", sv.cfr_iterations);
    sv.linear_averaging = solver.boolean("linear_averaging", sv.linear_averaging);
    sv.history_gate = solver.unsigned64("history_gate", sv.history_gate);
    require_positive(sv.cfr_iterations, "solver.iterations");
  } else if (sv.type == "deep_cfr") {
    DeepCfrConfig& dc = sv.deep;
    dc.iterations = solver.integer("iterations", dc.iterations);
    dc.traversals_per_iteration =
        solver.integer("traversals_per_iteration", dc.traversals_per_iteration);
    dc.advantage_hidden = solver.int_list("advantage_hidden", dc.advantage_hidden);
    dc.strategy_hidden = solver.int_list("strategy_hidden", dc.strategy_hidden);
    dc.advantage_capacity = solver.integer("advantage_capacity", dc.advantage_capacity);
    dc.strategy_capacity = solver.integer("strategy_capacity", dc.strategy_capacity);
    dc.advantage_train_steps =
        solver.integer("advantage_train_steps", dc.advantage_train_steps);
    dc.strategy_train_steps =
        solver.integer("strategy_train_steps", dc.strategy_train_steps);
    dc.batch_size = solver.integer("batch_size", dc.batch_size);
    dc.learning_rate = solver.number("learning_rate", dc.learning_rate);
    dc.use_adam = solver.boolean("use_adam", dc.use_adam);
    require_positive(dc.iterations, "solver.iterations");
    require_positive(dc.traversals_per_iteration, "solver.traversals_per_iteration");
    require_positive(dc.batch_size, "solver.batch_size");
  } else if (sv.type == "dqn") {
    DqnConfig& qc = sv.dqn;
    qc.episodes = solver.integer("episodes", qc.episodes);
    qc.epsilon_start = solver.number("epsilon_start", qc.epsilon_start);
    qc.epsilon_end = solver.number("epsilon_end", qc.epsilon_end);
    qc.epsilon_decay_episodes =
        solver.integer("epsilon_decay_episodes", qc.epsilon_decay_episodes);
    qc.hidden = solver.int_list("hidden", qc.hidden);
    qc.replay_capacity = solver.integer("replay_capacity", qc.replay_capacity);
    qc.batch_size = solver.integer("batch_size", qc.batch_size);
    qc.learn_start = solver.integer("learn_start", qc.learn_start);
    qc.train_every = solver.integer("train_every", qc.train_every);
    qc.target_sync_every = solver.integer("target_sync_every", qc.target_sync_every);
    qc.learning_rate = solver.number("learning_rate", qc.learning_rate);
    qc.discount = solver.number("discount", qc.discount);
    qc.use_adam = solver.boolean("use_adam", qc.use_adam);
    require_positive(qc.episodes, "solver.episodes");
    require_positive(qc.batch_size, "solver.batch_size");
  } else {
    throw CliError("config error: solver.type must be tabular_cfr, deep_cfr or dqn");
  }
  solver.finish();
  sv.deep.seed = cfg.seed;
  sv.dqn.seed = cfg.seed;

  Section ev = top.child("evaluation");
  cfg.evaluation.mode = ev.text("mode", cfg.evaluation.mode);
  if (cfg.evaluation.mode != "exact" && cfg.evaluation.mode != "sampled")
    throw CliError("config error: evaluation.mode must be exact or sampled");
  cfg.evaluation.episodes = ev.integer("episodes", cfg.evaluation.episodes);
  require_positive(cfg.evaluation.episodes, "evaluation.episodes");
  cfg.evaluation.eval_every = ev.integer("eval_every", cfg.evaluation.eval_every);
  if (cfg.evaluation.eval_every < 0)
    throw CliError("config error: evaluation.eval_every must be >= 0");
  ev.finish();

  top.finish();
  return cfg;
}

// Resolved-config snapshot; reparsing it reproduces the run exactly.
OrderedJson config_snapshot(const ExperimentConfig& cfg) {
  OrderedJson j;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  j["timing"] = cfg.timing;
  j["policy_dump_samples"] = cfg.policy_dump_samples;

  OrderedJson game;
  game["type"] = cfg.game.type;
  game["num_pulses"] = cfg.game.radar.num_pulses;
  game["num_subpulses"] = cfg.game.radar.num_subpulses;
  game["num_freqs"] = cfg.game.radar.num_freqs;
  game["scenario"] = scenario_name(cfg.game.radar.scenario);
  game["case_a_weights"] =
      cfg.game.radar.case_a_weights == CaseAWeights::kUniform ? "uniform" : "rcs_inverse";
  const PhysicsParams& p = cfg.game.radar.physics;
  OrderedJson physics;
  physics["transmit_power"] = p.transmit_power;
  physics["antenna_gain_db"] = p.antenna_gain_db;
  physics["wavelength"] = p.wavelength;
  physics["target_range"] = p.target_range;
  physics["system_temp"] = p.system_temp;
  physics["subpulse_bandwidth"] = p.subpulse_bandwidth;
  physics["spot_bandwidth"] = p.spot_bandwidth;
  physics["noise_bandwidth"] = p.noise_bandwidth;
  physics["jammer_power"] = p.jammer_power;
  physics["jammer_gain_db"] = p.jammer_gain_db;
  physics["rcs"] = p.rcs;
  physics["pfa"] = p.pfa;
  game["physics"] = std::move(physics);
  j["game"] = std::move(game);

  OrderedJson solver;
  solver["type"] = cfg.solver.type;
  if (cfg.solver.type == "tabular_cfr") {
    solver["iterations"] = cfg.solver.cfr_iterations;
    solver["linear_averaging"] = cfg.solver.linear_averaging;
    solver["history_gate"] = cfg.solver.history_gate;
  } else if (cfg.solver.type == "deep_cfr") {
    const DeepCfrConfig& dc = cfg.solver.deep;
    solver["iterations"] = dc.iterations;
    solver["traversals_per_iteration"] = dc.traversals_per_iteration;
    solver["advantage_hidden"] = dc.advantage_hidden;
    solver["strategy_hidden"] = dc.strategy_hidden;
    solver["advantage_capacity"] = dc.advantage_capacity;
    solver["strategy_capacity"] = dc.strategy_capacity;
    solver["advantage_train_steps"] = dc.advantage_train_steps;
    solver["strategy_train_steps"] = dc.strategy_train_steps;
    solver["batch_size"] = dc.batch_size;
    solver["learning_rate"] = dc.learning_rate;
    solver["use_adam"] = dc.use_adam;
  } else {
    const DqnConfig& qc = cfg.solver.dqn;
    solver["episodes"] = qc.episodes;
    solver["epsilon_start"] = qc.epsilon_start;
    solver["epsilon_end"] = qc.epsilon_end;
    solver["epsilon_decay_episodes"] = qc.epsilon_decay_episodes;
    solver["hidden"] = qc.hidden;
    solver["replay_capacity"] = qc.replay_capacity;
    solver["batch_size"] = qc.batch_size;
    solver["learn_start"] = qc.learn_start;
    solver["train_every"] = qc.train_every;
    solver["target_sync_every"] = qc.target_sync_every;
    solver["learning_rate"] = qc.learning_rate;
    solver["discount"] = qc.discount;
    solver["use_adam"] = qc.use_adam;
  }
  j["solver"] = std::move(solver);

  OrderedJson ev;
  ev["mode"] = cfg.evaluation.mode;
  ev["episodes"] = cfg.evaluation.episodes;
  ev["eval_every"] = cfg.evaluation.eval_every;
  j["evaluation"] = std::move(ev);
  return j;
}

// ---------------------------------------------------------------------------
// Games, profiles, timing, output files.

struct GameBundle {
  std::shared_ptr<const Game> game;
  std::shared_ptr<const RadarJamGame> radar;  // null for kuhn
};

GameBundle make_game(const GameSection& section) {
  if (section.type == "kuhn") return {std::make_shared<const KuhnGame>(), nullptr};
  auto radar = RadarJamGame::create(section.radar);
  return {radar, radar};
}

FeatureEncoder make_encoder(const GameBundle& bundle) {
  return bundle.radar ? make_radar_encoder(bundle.radar) : make_kuhn_encoder();
}

constexpr std::uint64_t kExactGate = 5'000'000;

bool enumerable(const Game& game) {
  return game.num_terminal_histories() <= kExactGate;
}

void require_enumerable(const Game& game, const char* what) {
  if (!enumerable(game))
    throw CliError(std::string(what) + " needs a full tree walk; this game has " +
                   std::to_string(game.num_terminal_histories()) +
                   " terminal histories (gate " + std::to_string(kExactGate) +
                   "), use sampled evaluation");
}

// Scenario cases a/b pin the radar's mix; the solvers train only the jammer.
std::array<std::shared_ptr<const Policy>, 2> pinned_policies(const GameBundle& bundle) {
  std::array<std::shared_ptr<const Policy>, 2> fixed{nullptr, nullptr};
  if (bundle.radar == nullptr) return fixed;
  const Scenario scenario = bundle.radar->config().scenario;
  if (scenario == Scenario::kCaseA || scenario == Scenario::kCaseB)
    fixed[0] = bundle.radar->scenario_policy();
  return fixed;
}

// Per-player dispatch so a learned policy and a pinned one compose into a
// single profile object.
class SplitPolicy final : public Policy {
 public:
  SplitPolicy(std::shared_ptr<const Policy> p0, std::shared_ptr<const Policy> p1)
      : p0_(std::move(p0)), p1_(std::move(p1)) {}

  std::vector<double> action_probabilities(const GameState& state) const override {
    return (state.current_player() == 0 ? p0_ : p1_)->action_probabilities(state);
  }

 private:
  std::shared_ptr<const Policy> p0_;
  std::shared_ptr<const Policy> p1_;
};

struct Profile {
  std::shared_ptr<const Policy> p0;
  std::shared_ptr<const Policy> p1;

  std::shared_ptr<const Policy> joint() const {
    return std::make_shared<SplitPolicy>(p0, p1);
  }
};

Profile compose_profile(TabularPolicy learned,
                        const std::array<std::shared_ptr<const Policy>, 2>& fixed) {
  auto shared = std::make_shared<const TabularPolicy>(std::move(learned));
  Profile profile;
  profile.p0 = fixed[0] ? fixed[0] : std::shared_ptr<const Policy>(shared);
  profile.p1 = fixed[1] ? fixed[1] : std::shared_ptr<const Policy>(shared);
  return profile;
}

class Timer {
 public:
  explicit Timer(bool wall) : wall_(wall), start_(std::chrono::steady_clock::now()) {}

  double elapsed() const {
    if (!wall_) return 0.0;
    const auto now = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(now - start_).count();
  }

  std::string seconds_text() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", elapsed());
    return buf;
  }

 private:
  bool wall_;
  std::chrono::steady_clock::time_point start_;
};

class MetricsWriter {
 public:
  MetricsWriter(const fs::path& path, const Timer& timer) : timer_(&timer) {
    out_.open(path, std::ios::binary);
    if (!out_) throw CliError("cannot write " + path.string());
    out_ << "index,metric,value,seconds\n";
  }

  void row(long long index, const std::string& metric, double value) {
    out_ << index << ',' << metric << ',' << fmt(value) << ','
         << timer_->seconds_text() << '\n';
  }

 private:
  std::ofstream out_;
  const Timer* timer_;
};

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError("cannot write " + path.string());
  out << text;
  if (!out) throw CliError("write failed for " + path.string());
}

void write_json_file(const fs::path& path, const OrderedJson& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return Rng(seed).split(salt).next_u64();
}

// ---------------------------------------------------------------------------
// Policy dumps.

OrderedJson policy_to_json(const std::map<InfoStateKey, std::vector<double>>& table) {
  OrderedJson entries = OrderedJson::array();
  for (const auto& [key, probs] : table) {
    OrderedJson entry;
    entry["player"] = key.player;
    entry["state"] = key.digest;
    entry["probs"] = probs;
    entries.push_back(std::move(entry));
  }
  OrderedJson root;
  root["entries"] = std::move(entries);
  return root;
}

std::shared_ptr<TabularPolicy> load_policy(const std::string& path) {
  const Json j = load_json_file(path);
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
    throw CliError(path + ": not a policy dump (expected an entries array)");
  auto policy = std::make_shared<TabularPolicy>();
  for (const auto& entry : j["entries"]) {
    if (!entry.is_object() || !entry.contains("player") || !entry.contains("state") ||
        !entry.contains("probs"))
      throw CliError(path + ": malformed policy entry");
    const int player = entry["player"].get<int>();
    if (player != 0 && player != 1) throw CliError(path + ": entry player must be 0 or 1");
    std::vector<double> probs;
    for (const auto& v : entry["probs"]) {
      if (!v.is_number()) throw CliError(path + ": probs must be numbers");
      probs.push_back(v.get<double>());
    }
    if (probs.empty()) throw CliError(path + ": empty probs entry");
    policy->set({player, entry["state"].get<std::string>()}, std::move(probs));
  }
  return policy;
}

ActionId sample_chance(const GameState& state, Rng& rng) {
  const auto outcomes = state.chance_outcomes();
  const double r = rng.uniform();
  double cumulative = 0.0;
  for (const auto& [action, prob] : outcomes) {
    cumulative += prob;
    if (r < cumulative) return action;
  }
  return outcomes.back().first;
}

// Restriction of the profile to states visited by seeded self-play; the dump
// scheme for games past the enumeration gate.
std::map<InfoStateKey, std::vector<double>> sampled_policy_table(
    const Game& game, const Policy& joint, int episodes, Rng rng) {
  std::map<InfoStateKey, std::vector<double>> table;
  for (int e = 0; e < episodes; ++e) {
    auto state = game.new_initial_state();
    while (!state->is_terminal()) {
      if (state->is_chance()) {
        state->apply_action(sample_chance(*state, rng));
        continue;
      }
      const auto probs = joint.action_probabilities(*state);
      table.emplace(state->info_state_key(state->current_player()), probs);
      state->apply_action(state->legal_actions()[rng.sample_discrete(probs)]);
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Solver drivers. Each trains per the config, emitting checkpoint metric rows.

struct RunOutput {
  Profile profile;
  long long final_index = 0;
};

bool checkpoint_due(int index, int total, int every) {
  return (every > 0 && index % every == 0) || index == total;
}

void exact_checkpoint(const GameBundle& bundle, const Profile& profile, int index,
                      MetricsWriter& metrics) {
  metrics.row(index, "exploitability",
              exploitability(*bundle.game, *profile.p0, *profile.p1));
  metrics.row(index, "value", exact_value(*bundle.game, *profile.p0, *profile.p1));
}

RunOutput run_tabular_cfr(const ExperimentConfig& cfg, const GameBundle& bundle,
                          const std::array<std::shared_ptr<const Policy>, 2>& fixed,
                          MetricsWriter& metrics) {
  CfrOptions options;
  options.linear_averaging = cfg.solver.linear_averaging;
  options.history_gate = cfg.solver.history_gate;
  CfrSolver solver(*bundle.game, options);
  for (int p = 0; p < 2; ++p)
    if (fixed[p]) solver.set_fixed_policy(p, fixed[p]);

  const int total = cfg.solver.cfr_iterations;
  for (int it = 1; it <= total; ++it) {
    solver.run_iteration();
    if (checkpoint_due(it, total, cfg.evaluation.eval_every))
      exact_checkpoint(bundle, compose_profile(solver.average_policy(), fixed), it,
                       metrics);
  }
  return {compose_profile(solver.average_policy(), fixed), total};
}

RunOutput run_deep_cfr(const ExperimentConfig& cfg, const GameBundle& bundle,
                       const std::array<std::shared_ptr<const Policy>, 2>& fixed,
                       MetricsWriter& metrics) {
  DeepCfrSolver solver(bundle.game, make_encoder(bundle), cfg.solver.deep);
  for (int p = 0; p < 2; ++p)
    if (fixed[p]) solver.set_fixed_policy(p, fixed[p]);
  const int learners = (fixed[0] ? 0 : 1) + (fixed[1] ? 0 : 1);
  const bool exact_ok = enumerable(*bundle.game) && cfg.evaluation.mode == "exact";

  const int total = cfg.solver.deep.iterations;
  for (int it = 1; it <= total; ++it) {
    solver.run_iteration();
    if (!checkpoint_due(it, total, cfg.evaluation.eval_every)) continue;
    for (int p = 0; p < 2; ++p)
      if (!fixed[p]) metrics.row(it, "advantage_loss_p" + std::to_string(p),
                                 solver.advantage_loss(p));
    metrics.row(it, "episodes",
                static_cast<double>(it) * cfg.solver.deep.traversals_per_iteration *
                    learners);
    if (exact_ok) {
      auto policy = solver.average_policy();
      exact_checkpoint(bundle, Profile{policy, policy}, it, metrics);
    }
  }
  auto policy = solver.average_policy();
  return {Profile{policy, policy}, total};
}

RunOutput run_dqn(const ExperimentConfig& cfg, const GameBundle& bundle,
                  const std::array<std::shared_ptr<const Policy>, 2>& fixed,
                  MetricsWriter& metrics) {
  DqnSolver solver(bundle.game, make_encoder(bundle), cfg.solver.dqn);
  for (int p = 0; p < 2; ++p)
    if (fixed[p]) solver.set_fixed_policy(p, fixed[p]);
  const bool exact_ok = enumerable(*bundle.game) && cfg.evaluation.mode == "exact";

  const int total = cfg.solver.dqn.episodes;
  int window_start = 0;
  for (int ep = 1; ep <= total; ++ep) {
    solver.run_episode();
    if (!checkpoint_due(ep, total, cfg.evaluation.eval_every)) continue;
    const auto& returns = solver.episode_returns();
    const double mean =
        std::accumulate(returns.begin() + window_start, returns.end(), 0.0) /
        static_cast<double>(ep - window_start);
    window_start = ep;
    metrics.row(ep, "mean_return", mean);
    metrics.row(ep, "epsilon", solver.epsilon());
    for (int p = 0; p < 2; ++p)
      if (!fixed[p]) metrics.row(ep, "loss_p" + std::to_string(p), solver.last_loss(p));
    if (exact_ok) {
      auto policy = solver.greedy_policy();
      exact_checkpoint(bundle, Profile{policy, policy}, ep, metrics);
    }
  }
  auto policy = solver.greedy_policy();
  return {Profile{policy, policy}, total};
}

// ---------------------------------------------------------------------------
// Shared experiment pipeline for solve and case.

struct ExperimentArtifacts {
  GameBundle bundle;
  RunOutput run;
  OrderedJson summary;
  fs::path dir;
  std::optional<Timer> timer;
};

ExperimentArtifacts train_and_eval(const ExperimentConfig& cfg, const std::string& verb) {
  ExperimentArtifacts a;
  a.dir = cfg.output_dir;
  fs::create_directories(a.dir);
  a.timer.emplace(cfg.timing == "wall");
  a.bundle = make_game(cfg.game);
  write_json_file(a.dir / "config.json", config_snapshot(cfg));

  const auto fixed = pinned_policies(a.bundle);
  MetricsWriter metrics(a.dir / "metrics.csv", *a.timer);
  if (cfg.solver.type == "tabular_cfr") {
    a.run = run_tabular_cfr(cfg, a.bundle, fixed, metrics);
  } else if (cfg.solver.type == "deep_cfr") {
    a.run = run_deep_cfr(cfg, a.bundle, fixed, metrics);
  } else {
    a.run = run_dqn(cfg, a.bundle, fixed, metrics);
  }

  a.summary["verb"] = verb;
  a.summary["game"] = a.bundle.game->name();
  a.summary["solver"] = cfg.solver.type;
  a.summary["index"] = a.run.final_index;
  const Profile& profile = a.run.profile;
  if (cfg.evaluation.mode == "exact") {
    require_enumerable(*a.bundle.game, "exact evaluation");
    a.summary["value"] = exact_value(*a.bundle.game, *profile.p0, *profile.p1);
    a.summary["exploitability"] =
        exploitability(*a.bundle.game, *profile.p0, *profile.p1);
  } else {
    const SampledValue sv =
        sampled_value(*a.bundle.game, *profile.p0, *profile.p1,
                      cfg.evaluation.episodes, derive_seed(cfg.seed, 0xE7A1));
    a.summary["value"] = sv.mean;
    a.summary["value_std_error"] = sv.std_error;
    a.summary["eval_episodes"] = sv.episodes;
  }
  return a;
}

void finalize_experiment(ExperimentArtifacts& a, const ExperimentConfig& cfg) {
  std::map<InfoStateKey, std::vector<double>> table;
  const auto joint = a.run.profile.joint();
  if (enumerable(*a.bundle.game)) {
    table = tabularize(*a.bundle.game, *joint).table();
  } else {
    table = sampled_policy_table(*a.bundle.game, *joint, cfg.policy_dump_samples,
                                 Rng(derive_seed(cfg.seed, 0xD0D0)));
  }
  write_json_file(a.dir / "policy.json", policy_to_json(table));
  a.summary["policy_states"] = table.size();
  a.summary["seconds"] = a.timer->elapsed();
  write_json_file(a.dir / "summary.json", a.summary);

  std::cout << "game " << a.summary["game"].get<std::string>() << "\n"
            << "solver " << cfg.solver.type << "\n"
            << "index " << a.run.final_index << "\n"
            << "value " << fmt(a.summary["value"].get<double>()) << "\n";
  if (a.summary.contains("exploitability"))
    std::cout << "exploitability " << fmt(a.summary["exploitability"].get<double>())
              << "\n";
  if (a.summary.contains("value_std_error"))
    std::cout << "std_error " << fmt(a.summary["value_std_error"].get<double>()) << "\n";
  std::cout << "artifact_dir " << a.dir.string() << "\n";
}

// ---------------------------------------------------------------------------
// Verbs.

int cmd_solve(const std::string& config_path) {
  ExperimentConfig cfg = parse_config(load_json_file(config_path));
  auto artifacts = train_and_eval(cfg, "solve");
  finalize_experiment(artifacts, cfg);
  return 0;
}

// The round-2 jammer decision after one completed pulse: the fixture states
// behind the case (a)/(b) "preferred jam action" checks. Round 1: case (a)
// radar plays the all-f0 tuple and the jammer Reacts; case (b) radar plays the
// ascending all-distinct tuple and the jammer Barrages. Both lie on a trained
// jammer's own support, which is what makes the averaged strategy there
// meaningful.
std::unique_ptr<GameState> make_probe_state(const GameBundle& bundle, char letter) {
  const RadarJamGame& game = *bundle.radar;
  std::vector<int> tuple(game.num_subpulses(), 0);
  if (letter == 'b') std::iota(tuple.begin(), tuple.end(), 0);
  const int code = game.encode_tuple(tuple);
  const auto& menu = game.radar_menu();
  const auto it = std::find(menu.begin(), menu.end(), code);
  if (it == menu.end()) throw CliError("probe tuple not in the radar menu");
  const ActionId radar_action = static_cast<ActionId>(it - menu.begin());

  const JammerAction::Kind kind =
      letter == 'a' ? JammerAction::kReact : JammerAction::kBarrage;
  ActionId jam_action = -1;
  for (std::size_t i = 0; i < game.jammer_menu().size(); ++i)
    if (game.jammer_menu()[i].kind == kind) jam_action = static_cast<ActionId>(i);
  if (jam_action < 0) throw CliError("probe jam action not in the jammer menu");

  auto state = game.new_initial_state();
  state->apply_action(radar_action);
  state->apply_action(jam_action);
  state->apply_action(radar_action);
  return state;
}

int cmd_case(const std::string& letter, const std::string& config_path) {
  ExperimentConfig cfg = parse_config(load_json_file(config_path));
  if (cfg.game.type != "radar")
    throw CliError("case studies are defined on the radar game only");
  cfg.game.radar.scenario = parse_scenario(std::string("case_") + letter, "case");

  auto artifacts = train_and_eval(cfg, "case");
  artifacts.summary["case"] = letter;
  const Profile& profile = artifacts.run.profile;

  if (letter == "a" || letter == "b") {
    if (cfg.game.radar.num_pulses >= 2) {
      const auto probe = make_probe_state(artifacts.bundle, letter[0]);
      const auto probs = profile.p1->action_probabilities(*probe);
      const auto legal = probe->legal_actions();
      const auto& menu = artifacts.bundle.radar->jammer_menu();

      artifacts.summary["probe_state"] = probe->info_state_key(1).digest;
      std::cout << "probe_state " << probe->info_state_key(1).digest << "\n";
      OrderedJson probe_probs;
      int best = 0;
      for (std::size_t i = 0; i < legal.size(); ++i) {
        const std::string label = menu[legal[i]].to_string();
        probe_probs[label] = probs[i];
        std::cout << "probe_prob " << label << " " << fmt(probs[i]) << "\n";
        if (probs[i] > probs[best]) best = static_cast<int>(i);
      }
      artifacts.summary["probe_probs"] = std::move(probe_probs);
      artifacts.summary["probe_argmax"] = menu[legal[best]].to_string();
      std::cout << "probe_argmax " << menu[legal[best]].to_string() << "\n";
    }
  } else {
    // Cases c/d: compare the trained radar against the uniform baseline, both
    // facing the jammer part of the trained profile.
    const auto uniform = std::make_shared<const UniformPolicy>();
    const double trained = artifacts.summary["value"].get<double>();
    double baseline;
    if (cfg.evaluation.mode == "exact") {
      baseline = exact_value(*artifacts.bundle.game, *uniform, *profile.p1);
    } else {
      baseline = sampled_value(*artifacts.bundle.game, *uniform, *profile.p1,
                               cfg.evaluation.episodes, derive_seed(cfg.seed, 0xBA5E))
                     .mean;
    }
    artifacts.summary["baseline_value"] = baseline;
    artifacts.summary["margin"] = trained - baseline;
    std::cout << "trained_value " << fmt(trained) << "\n"
              << "baseline_value " << fmt(baseline) << "\n"
              << "margin " << fmt(trained - baseline) << "\n";
  }

  finalize_experiment(artifacts, cfg);
  return 0;
}

int cmd_exploitability(const std::string& config_path, const std::string& policy_path) {
  const ExperimentConfig cfg = parse_config(load_json_file(config_path));
  const GameBundle bundle = make_game(cfg.game);
  require_enumerable(*bundle.game, "exact exploitability");
  const auto policy = load_policy(policy_path);
  const double br0 = best_response_value(*bundle.game, 0, *policy);
  const double br1 = best_response_value(*bundle.game, 1, *policy);
  std::cout << "exploitability " << fmt(exploitability(*bundle.game, *policy, *policy))
            << "\n"
            << "br_value_p0 " << fmt(br0) << "\n"
            << "br_value_p1 " << fmt(br1) << "\n"
            << "value " << fmt(exact_value(*bundle.game, *policy, *policy)) << "\n";
  return 0;
}

int cmd_eval(const std::string& config_path, const std::string& path_a,
             const std::string& path_b) {
  const ExperimentConfig cfg = parse_config(load_json_file(config_path));
  const GameBundle bundle = make_game(cfg.game);
  const auto policy_a = load_policy(path_a);
  const auto policy_b = load_policy(path_b);
  std::cout << "mode " << cfg.evaluation.mode << "\n";
  if (cfg.evaluation.mode == "exact") {
    require_enumerable(*bundle.game, "exact evaluation");
    std::cout << "value " << fmt(exact_value(*bundle.game, *policy_a, *policy_b))
              << "\n";
  } else {
    const SampledValue sv =
        sampled_value(*bundle.game, *policy_a, *policy_b, cfg.evaluation.episodes,
                      derive_seed(cfg.seed, 0xE7A1));
    std::cout << "value " << fmt(sv.mean) << "\n"
              << "std_error " << fmt(sv.std_error) << "\n"
              << "episodes " << sv.episodes << "\n";
  }
  return 0;
}

// History tokens: radar moves as subpulse carrier digit strings ("012"),
// jammer moves as menu labels ("S0", "Ra", "Ba"), whitespace separated.
int cmd_render(const std::string& config_path, const std::string& history) {
  const ExperimentConfig cfg = parse_config(load_json_file(config_path));
  if (cfg.game.type != "radar") throw CliError("render is defined on the radar game only");
  const GameBundle bundle = make_game(cfg.game);
  const RadarJamGame& game = *bundle.radar;

  auto state = game.new_initial_state();
  std::istringstream stream(history);
  std::string token;
  int position = 0;
  while (stream >> token) {
    ++position;
    if (state->is_terminal())
      throw CliError("history token " + std::to_string(position) + " ('" + token +
                     "'): the game is already over");
    if (state->current_player() == 0) {
      if (static_cast<int>(token.size()) != game.num_subpulses())
        throw CliError("history token " + std::to_string(position) + " ('" + token +
                       "'): radar moves are " + std::to_string(game.num_subpulses()) +
                       " carrier digits");
      std::vector<int> tuple;
      for (char c : token) {
        if (c < '0' || c >= '0' + game.num_freqs())
          throw CliError("history token " + std::to_string(position) + " ('" + token +
                         "'): carrier digits run 0.." +
                         std::to_string(game.num_freqs() - 1));
        tuple.push_back(c - '0');
      }
      const auto& menu = game.radar_menu();
      const auto it = std::find(menu.begin(), menu.end(), game.encode_tuple(tuple));
      if (it == menu.end())
        throw CliError("history token " + std::to_string(position) + " ('" + token +
                       "'): tuple not in the radar menu under scenario " +
                       scenario_name(game.config().scenario));
      state->apply_action(static_cast<ActionId>(it - menu.begin()));
    } else {
      const auto& menu = game.jammer_menu();
      ActionId action = -1;
      for (std::size_t i = 0; i < menu.size(); ++i)
        if (menu[i].to_string() == token) action = static_cast<ActionId>(i);
      if (action < 0)
        throw CliError("history token " + std::to_string(position) + " ('" + token +
                       "'): not in the jammer menu under scenario " +
                       scenario_name(game.config().scenario));
      state->apply_action(action);
    }
  }

  const auto& radar_state = dynamic_cast<const RadarJamState&>(*state);
  std::cout << "viewer radar\n"
            << render_board(radar_state, 0) << "viewer jammer\n"
            << render_board(radar_state, 1);
  return 0;
}

int cmd_export(const std::string& policy_path, const std::string& out_path) {
  const auto policy = load_policy(policy_path);
  write_json_file(out_path, policy_to_json(policy->table()));
  std::cout << "exported " << policy->table().size() << " entries to " << out_path
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solver laboratory for the multi-round radar / jammer frequency game"};
  app.require_subcommand(1);

  std::string config_path, policy_path, policy_path_b, out_path, history, case_letter;

  auto* solve = app.add_subcommand("solve", "train per the config, write the artifact dir");
  solve->add_option("config", config_path, "experiment config (JSON)")->required();

  auto* expl = app.add_subcommand("exploitability",
                                  "exact exploitability of a dumped profile");
  expl->add_option("config", config_path, "experiment config (JSON)")->required();
  expl->add_option("policy", policy_path, "policy dump (JSON)")->required();

  auto* eval = app.add_subcommand("eval", "expected utility of policy A vs policy B");
  eval->add_option("config", config_path, "experiment config (JSON)")->required();
  eval->add_option("policyA", policy_path, "player-0 policy dump")->required();
  eval->add_option("policyB", policy_path_b, "player-1 policy dump")->required();

  auto* case_cmd = app.add_subcommand("case", "scenario case study");
  case_cmd->add_option("which", case_letter, "one of a, b, c, d")
      ->required()
      ->check(CLI::IsMember({"a", "b", "c", "d"}));
  case_cmd->add_option("config", config_path, "experiment config (JSON)")->required();

  auto* render = app.add_subcommand("render", "text boards for a history");
  render->add_option("config", config_path, "experiment config (JSON)")->required();
  render->add_option("history", history,
                     "whitespace-separated moves, e.g. \"012 Ra 000\"; empty for the "
                     "initial state");

  auto* export_cmd = app.add_subcommand("export", "canonical rewrite of a policy dump");
  export_cmd->add_option("policy", policy_path, "policy dump (JSON)")->required();
  export_cmd->add_option("path", out_path, "destination file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(config_path);
    if (expl->parsed()) return cmd_exploitability(config_path, policy_path);
    if (eval->parsed()) return cmd_eval(config_path, policy_path, policy_path_b);
    if (case_cmd->parsed()) return cmd_case(case_letter, config_path);
    if (render->parsed()) return cmd_render(config_path, history);
    if (export_cmd->parsed()) return cmd_export(policy_path, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
