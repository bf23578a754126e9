#include "see/cli/commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "see/cli/formulas.hpp"
#include "see/cli/outputs.hpp"
#include "see/cli/snapshot.hpp"
#include "see/errors.hpp"

namespace see::cli {

namespace fs = std::filesystem;

RunFiles run_files(const fs::path& dir, const std::string& label, std::uint64_t seed) {
  const std::string stem = label + "_seed" + std::to_string(seed);
  return {dir / (stem + ".csv"), dir / (stem + ".config.json"), dir / (stem + ".theta.bin"),
          dir / (stem + ".omega.bin")};
}

namespace {

SnapshotFile exploit_snapshot(const trainer::Trainer& t) {
  const auto& net = t.exploit().network();
  SnapshotFile s;
  s.kind = SnapshotKind::exploitation;
  s.env = t.config().env;
  s.obs_dim = net.obs_dim();
  s.action_count = net.action_count();
  s.hidden = t.config().hidden;
  s.values = t.exploit().online().values();
  s.probe_offset = s.values.size();
  return s;
}

SnapshotFile explore_snapshot(const trainer::Trainer& t) {
  const auto& net = t.explore()->network();
  SnapshotFile s;
  s.kind = SnapshotKind::exploration;
  s.env = t.config().env;
  s.obs_dim = net.obs_dim();
  s.action_count = net.action_count();
  s.hidden = t.config().hidden;
  s.probe_count = net.probe_count();
  s.probe_offset = net.probe_offset();
  s.values = t.explore()->online().values();
  return s;
}

void write_sidecar(const fs::path& path, const ResolvedConfig& config) {
  auto j = to_json(config.run);
  j["_derivations"] = config.derivations;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

RunFiles train_to_files(const ResolvedConfig& config, const fs::path& dir, const std::string& label,
                        bool quiet) {
  fs::create_directories(dir);
  const auto& run = config.run;
  const RunFiles files = run_files(dir, label, run.seed);
  write_sidecar(files.config, config);
  CurveWriter writer(files.curve, run.env, run.seed);
  trainer::Trainer t(run);
  t.run([&](const trainer::MetricsRecord& r) {
    writer.write(r);
    if (!quiet && r.kind == trainer::RecordKind::evaluation)
      std::fprintf(stderr, "[%s seed %llu] step %llu eval_return %.3f\n", label.c_str(),
                   static_cast<unsigned long long>(run.seed),
                   static_cast<unsigned long long>(r.step), r.value);
  });
  writer.flush();
  save_snapshot(files.exploit, exploit_snapshot(t));
  if (t.explore()) save_snapshot(files.explore, explore_snapshot(t));
  return files;
}

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::string env;
  std::uint64_t total_steps = 0;
  bool quiet = false;
};

ResolvedConfig prepare(const CommonOptions& o, trainer::Algorithm fallback) {
  ResolvedConfig rc;
  if (!o.config_path.empty()) {
    rc = load_config(o.config_path);
  } else {
    nlohmann::json doc;
    doc["algorithm"] = std::string(trainer::to_string(fallback));
    doc["env"] = o.env.empty() ? std::string("planar_lander") : o.env;
    rc = resolve_config(doc);
  }
  if (!o.env.empty()) rc.run.env = o.env;
  if (o.total_steps > 0) rc.run.total_steps = o.total_steps;
  rc.run.validate();
  return rc;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config_path, "JSON run configuration");
  if (config_required) c->required();
  cmd->add_option("--out", o.out_dir, "output directory")->required();
  cmd->add_option("--env", o.env, "override the environment");
  cmd->add_option("--total-steps", o.total_steps, "override total environment steps");
  cmd->add_flag("--quiet", o.quiet, "no progress output");
}

std::string label_of(const trainer::RunConfig& c) {
  if (c.algorithm == trainer::Algorithm::eps_greedy) return "eps_greedy";
  return c.ablation == trainer::Ablation::none ? "see" : std::string(trainer::to_string(c.ablation));
}

void print_derivations(const ResolvedConfig& rc, bool quiet) {
  if (quiet) return;
  for (const auto& d : rc.derivations) std::fprintf(stderr, "derived: %s\n", d.c_str());
}

std::vector<fs::path> run_seeds(ResolvedConfig rc, const fs::path& dir, const std::string& label,
                                std::uint64_t first, std::uint64_t count, bool quiet) {
  std::vector<fs::path> curves;
  for (std::uint64_t k = 0; k < count; ++k) {
    rc.run.seed = first + k;
    curves.push_back(train_to_files(rc, dir, label, quiet).curve);
  }
  write_aggregate(dir / "aggregate.csv", aggregate(curves));
  return curves;
}

}  // namespace

int run_command(int argc, const char* const* argv) {
  CLI::App app{"Error-seeking exploration experiments"};
  app.require_subcommand(1);

  CommonOptions train_opts;
  std::int64_t train_seed = -1;
  auto* train = app.add_subcommand("train", "train one run");
  add_common(train, train_opts, true);
  train->add_option("--seed", train_seed, "run seed (default: from config)");

  CommonOptions sweep_opts;
  std::uint64_t sweep_seeds = 0, sweep_first = 0;
  auto* sweep = app.add_subcommand("sweep", "train several seeds and aggregate");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--seeds", sweep_seeds, "number of seeds")->required()->check(CLI::PositiveNumber);
  sweep->add_option("--first-seed", sweep_first, "first seed");

  CommonOptions ablate_opts;
  std::uint64_t ablate_seeds = 1, ablate_first = 0;
  auto* ablate = app.add_subcommand("ablate", "run the four ablation variants");
  add_common(ablate, ablate_opts, false);
  ablate->add_option("--seeds", ablate_seeds, "seeds per variant")->check(CLI::PositiveNumber);
  ablate->add_option("--first-seed", ablate_first, "first seed");

  std::string snapshot_path, eval_env;
  std::size_t eval_episodes = 10;
  std::uint64_t eval_seed = 0;
  auto* evaluate = app.add_subcommand("evaluate", "greedy evaluation of a saved snapshot");
  evaluate->add_option("--snapshot", snapshot_path, "exploitation snapshot file")->required();
  evaluate->add_option("--episodes", eval_episodes, "episodes")->check(CLI::PositiveNumber);
  evaluate->add_option("--seed", eval_seed, "evaluation seed");
  evaluate->add_option("--env", eval_env, "override the environment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*train) {
      auto rc = prepare(train_opts, trainer::Algorithm::see);
      if (train_seed >= 0) rc.run.seed = static_cast<std::uint64_t>(train_seed);
      print_derivations(rc, train_opts.quiet);
      const auto files = train_to_files(rc, train_opts.out_dir, label_of(rc.run), train_opts.quiet);
      std::printf("%s\n", files.curve.string().c_str());
    } else if (*sweep) {
      auto rc = prepare(sweep_opts, trainer::Algorithm::see);
      print_derivations(rc, sweep_opts.quiet);
      run_seeds(rc, sweep_opts.out_dir, label_of(rc.run), sweep_first, sweep_seeds, sweep_opts.quiet);
      std::printf("%s\n", (fs::path(sweep_opts.out_dir) / "aggregate.csv").string().c_str());
    } else if (*ablate) {
      if (ablate_opts.total_steps == 0) ablate_opts.total_steps = 50000;
      auto rc = prepare(ablate_opts, trainer::Algorithm::see);
      if (rc.run.algorithm != trainer::Algorithm::see)
        throw ConfigError("ablate needs a see configuration");
      print_derivations(rc, ablate_opts.quiet);
      const fs::path root = ablate_opts.out_dir;
      fs::create_directories(root);
      std::ofstream combined(root / "ablation.csv", std::ios::binary | std::ios::trunc);
      combined << "variant,step,metric,mean,stderr,n\n";
      for (auto variant : {trainer::Ablation::none, trainer::Ablation::no_conditioning,
                           trainer::Ablation::no_max_update, trainer::Ablation::no_mixing}) {
        rc.run.ablation = variant;
        const std::string label = label_of(rc.run);
        const auto curves = run_seeds(rc, root / label, label, ablate_first, ablate_seeds,
                                      ablate_opts.quiet);
        for (const auto& row : aggregate(curves))
          combined << label << ',' << row.step << ',' << row.metric << ',' << format_value(row.mean)
                   << ',' << format_value(row.std_error) << ',' << row.n << '\n';
      }
      std::printf("%s\n", (root / "ablation.csv").string().c_str());
    } else if (*evaluate) {
      const auto snap = load_snapshot(snapshot_path);
      if (snap.kind != SnapshotKind::exploitation)
        throw ConfigError("evaluate needs an exploitation snapshot");
      const std::string env = eval_env.empty() ? snap.env : eval_env;
      const agents::QNetwork<float> net(snap.obs_dim, snap.action_count, snap.hidden);
      if (net.parameter_count() != snap.values.size())
        throw ConfigError("snapshot value count does not match its network shape");
      const auto result = trainer::evaluate(net, snap.values, env, eval_seed, 0, eval_episodes);
      std::printf("env %s episodes %zu mean_return %s normalized_score %s\n", env.c_str(),
                  eval_episodes, format_value(result.mean_return).c_str(),
                  format_value(normalized_score(env, result.mean_return)).c_str());
      for (std::size_t i = 0; i < result.returns.size(); ++i)
        std::printf("episode %zu return %s length %zu\n", i, format_value(result.returns[i]).c_str(),
                    result.lengths[i]);
    }
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

int run_command(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"see"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_command(static_cast<int>(argv.size()), argv.data());
}

}  // namespace see::cli
