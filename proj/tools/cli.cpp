#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "mrca/analytics.hpp"
#include "mrca/event_stream.hpp"
#include "mrca/io.hpp"
#include "mrca/lookdown.hpp"
#include "mrca/mutation.hpp"
#include "mrca/particles.hpp"
#include "mrca/random.hpp"
#include "mrca/stats.hpp"
#include "mrca/verification.hpp"
#include "mrca/version.hpp"

namespace mrca::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct LookdownOptions {
  int levels = 1000;
  double t_start = 0.0;
  double t_end = 100.0;
  double burn_in = 20.0;
  std::string format = "csv";
  int event_levels = 10;
  double sample_spacing = 1.0;
  double theta = 0.0;  // 0: no substitutions
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(LookdownOptions, levels, t_start, t_end, burn_in, format, event_levels,
                                   sample_spacing, theta)

struct ParticleOptions {
  std::int64_t cap = 10000;
  double horizon = 100.0;
  double burn_in = 0.0;
  std::string init = "empty";
  std::string format = "csv";
  bool trajectory = true;
  bool residual_exit_time = false;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ParticleOptions, cap, horizon, burn_in, init, format, trajectory,
                                   residual_exit_time)

struct TablesOptions {
  std::string which = "L";
  std::int64_t max = 10;
  std::int64_t level = 2;
  std::string format = "csv";
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TablesOptions, which, max, level, format)

struct VerifyOptions {
  std::string profile = "full";
  std::vector<int> only;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(VerifyOptions, profile, only)

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

fs::path default_out_dir() {
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return "mrca_out";
}

struct Run {
  fs::path out_dir;
  io::RunManifest manifest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  template <typename Writer>
  void write(const std::string& name, Writer&& writer) {
    const fs::path path = out_dir / name;
    auto f = io::open_output(path);
    writer(f);
    io::finish_output(f, path);
    manifest.outputs.push_back(path.string());
  }

  void write_json(const std::string& name, const json& value) {
    const fs::path path = out_dir / name;
    io::write_json_file(path, value);
    manifest.outputs.push_back(path.string());
  }

  void finish() {
    manifest.version = kVersion;
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const fs::path path = out_dir / "manifest.json";
    manifest.outputs.push_back(path.string());
    io::write_json_file(path, manifest.to_json());
  }
};

Run begin(const std::string& command, const json& config, const fs::path& out_dir, std::optional<std::uint64_t> seed) {
  Run run;
  run.out_dir = out_dir;
  run.manifest.command = command;
  run.manifest.config = config;
  run.manifest.seed_from_entropy = !seed.has_value();
  run.manifest.seed = seed ? *seed : entropy_seed();
  return run;
}

// ---------------------------------------------------------------------------

int cmd_simulate_lookdown(const LookdownOptions& o, Run& run, std::ostream& out) {
  if (o.event_levels < 2) throw UsageError("--event-levels must be >= 2");
  if (!(o.sample_spacing > 0.0)) throw UsageError("--sample-spacing must be positive");
  if (o.theta < 0.0 || !std::isfinite(o.theta)) throw UsageError("--theta must be a positive decimal");
  lookdown::EngineConfig cfg;
  cfg.level_cap = o.levels;
  cfg.t_start = o.t_start;
  cfg.t_end = o.t_end;
  cfg.burn_in = o.burn_in;
  cfg.seed = run.manifest.seed;
  const lookdown::EventStream stream(cfg);

  const auto events = stream.events(cfg.t_start, cfg.t_end, std::min(o.event_levels, cfg.level_cap));
  if (o.format == "jsonl") {
    run.write("events.jsonl", [&](std::ostream& f) { io::write_events_jsonl(f, events); });
  } else {
    run.write("events.csv", [&](std::ostream& f) { io::write_events_csv(f, events); });
  }

  std::vector<double> times;
  for (std::size_t k = 0;; ++k) {
    const double t = cfg.t_start + static_cast<double>(k) * o.sample_spacing;
    if (t > cfg.t_end) break;
    times.push_back(t);
  }
  const auto sw = lookdown::sweep(stream, times, false);
  const auto observables = lookdown::observables_from_sweep(stream, sw, times);
  const auto process = lookdown::point_process_from_curves(sw.curves, {cfg.t_start, cfg.t_end});
  run.write("mrca.csv", [&](std::ostream& f) { io::write_mrca_csv(f, process.points); });
  run.write("observables.csv", [&](std::ostream& f) { io::write_observables_csv(f, observables); });

  std::size_t warnings = 0;
  for (const auto& ob : observables) warnings += ob.stationarity_warning ? 1 : 0;
  json summary{{"levels", cfg.level_cap},
               {"window", {cfg.t_start, cfg.t_end}},
               {"burn_in", cfg.burn_in},
               {"events_logged", events.size()},
               {"event_levels", std::min(o.event_levels, cfg.level_cap)},
               {"mrca_points", process.points.size()},
               {"open_curves", process.open_curves},
               {"samples", observables.size()},
               {"stationarity_warnings", warnings}};
  if (process.points.size() >= 2) {
    const double span = process.points.back().E - process.points.front().E;
    summary["mean_E_gap"] = span / static_cast<double>(process.points.size() - 1);
  }
  if (o.theta > 0.0) {
    if (process.points.size() >= 2) {
      mutation::MutationConfig mc;
      mc.theta = o.theta;
      mc.seed = derive_seed(run.manifest.seed, {11});
      const auto subs = mutation::simulate_substitutions(process.points, mc);
      run.write("substitutions.csv", [&](std::ostream& f) { io::write_substitutions_csv(f, subs); });
      std::int64_t total = 0;
      for (const auto& s : subs) total += s.S;
      summary["substitution_events"] = subs.size();
      summary["substitutions"] = total;
    } else {
      summary["substitutions_skipped"] = "fewer than two MRCA points";
    }
  }
  run.write_json("summary.json", summary);
  run.finish();
  out << summary.dump(2) << '\n';
  return kOk;
}

int cmd_simulate_particles(const ParticleOptions& o, Run& run, std::ostream& out) {
  if (!(o.burn_in >= 0.0) || !std::isfinite(o.burn_in)) throw UsageError("--burn-in must be >= 0");
  particles::ParticleSimConfig cfg;
  cfg.particle_cap = o.cap;
  cfg.horizon = o.burn_in + o.horizon;
  cfg.seed = derive_seed(run.manifest.seed, {0});
  cfg.residual_exit_time = o.residual_exit_time;
  cfg.record_trajectory = o.trajectory;
  if (o.init == "stationary") {
    Rng rng(derive_seed(run.manifest.seed, {1}));
    do {
      cfg.init = particles::sample_stationary(rng);
    } while (cfg.init.leading() >= cfg.particle_cap);
  } else if (o.init != "empty") {
    throw UsageError("--init must be empty or stationary");
  }
  const auto result = particles::simulate(cfg);

  std::vector<double> exits;
  for (const auto& e : result.exits) {
    if (e.E >= o.burn_in) exits.push_back(e.E);
  }
  run.write("exits.csv", [&](std::ostream& f) { io::write_exits_csv(f, exits); });
  if (o.trajectory) {
    std::vector<particles::TransitionEvent> kept;
    for (const auto& e : result.trajectory) {
      if (e.time >= o.burn_in) kept.push_back(e);
    }
    if (o.format == "jsonl") {
      run.write("trajectory.jsonl", [&](std::ostream& f) { io::write_trajectory_jsonl(f, kept); });
    } else {
      run.write("trajectory.csv", [&](std::ostream& f) { io::write_trajectory_csv(f, kept); });
    }
  }

  json summary{{"cap", cfg.particle_cap},
               {"horizon", o.horizon},
               {"burn_in", o.burn_in},
               {"init", cfg.init.to_string()},
               {"exits", exits.size()},
               {"exit_bias", result.exit_bias},
               {"final_state", result.final_state.to_string()}};
  if (!exits.empty()) summary["first_exit_after_burn_in"] = exits.front() - o.burn_in;
  if (exits.size() >= 100) {
    const auto g = particles::exit_gap_statistics(exits);
    summary["gap_statistics"] = {{"n", g.n},
                                 {"mean", g.mean},
                                 {"ks_statistic", g.ks_statistic},
                                 {"ks_p_value", g.ks_p_value},
                                 {"lag1_autocorrelation", g.lag1_autocorrelation},
                                 {"unit_window_dispersion", g.unit_window_dispersion},
                                 {"unit_windows", g.unit_windows}};
  }
  run.write_json("summary.json", summary);
  run.finish();
  out << summary.dump(2) << '\n';
  return kOk;
}

json z_extras() {
  json pgf = json::array();
  for (double u : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto v = analytics::pgf_Z(u);
    pgf.push_back({{"u", u}, {"pgf", v.value}, {"tail_bound", v.tail_bound}});
  }
  const auto [mean, var] = analytics::mean_var_Z();
  return {{"pgf", pgf}, {"mean", mean}, {"variance", var}};
}

int cmd_tables(const TablesOptions& o, Run& run, std::ostream& out) {
  if (o.max < 1) throw UsageError("--max must be >= 1");
  const bool as_json = o.format == "json";
  const std::string stem = "table_" + o.which;
  json doc{{"which", o.which}};

  auto emit_table = [&](const PmfTable& table) {
    if (as_json) {
      doc["table"] = io::table_to_json(table);
    } else {
      run.write(stem + ".csv", [&](std::ostream& f) { io::write_table_csv(f, table); });
      io::write_table_csv(out, table);
    }
  };

  if (o.which == "L") {
    emit_table(analytics::table_L(o.max));
  } else if (o.which == "LI") {
    if (o.level < 1) throw UsageError("--level must be >= 1");
    doc["level"] = o.level;
    doc["pmf_L"] = to_string(analytics::pmf_L_exact(o.level));
    emit_table(analytics::table_LI(o.level, std::max<std::int64_t>(o.max, 3)));
    if (!as_json) out << "# conditional on L=" << o.level << ", P[L=" << o.level << "] = " << to_string(analytics::pmf_L_exact(o.level)) << '\n';
  } else if (o.which == "K") {
    if (o.level < 2) throw UsageError("--level (j) must be >= 2");
    doc["j"] = o.level;
    emit_table(analytics::table_K_marginal(o.level));
  } else if (o.which == "Z") {
    emit_table(analytics::table_Z(static_cast<int>(o.max)));
    const json extras = z_extras();
    if (as_json) {
      doc.update(extras);
    } else {
      run.write(stem + "_pgf.csv", [&](std::ostream& f) {
        f << "u,pgf,tail_bound\n";
        for (const auto& row : extras["pgf"]) {
          f << io::format_double(row["u"].get<double>()) << ',' << io::format_double(row["pgf"].get<double>()) << ','
            << io::format_double(row["tail_bound"].get<double>()) << '\n';
        }
      });
      run.write_json(stem + "_moments.json", {{"mean", extras["mean"]}, {"variance", extras["variance"]}});
    }
  } else if (o.which == "pi") {
    const std::size_t max_count = static_cast<std::size_t>(std::max<std::int64_t>(o.level, 1));
    const auto configs = analytics::enumerate_pi_lambda(o.max, max_count);
    json rows = json::array();
    double listed = 0.0;
    for (const auto& c : configs) {
      listed += to_double(c.weight);
      rows.push_back({{"config", c.config.to_string()}, {"weight", to_double(c.weight)}, {"exact", to_string(c.weight)}});
    }
    doc["max_leading"] = o.max;
    doc["max_count"] = max_count;
    doc["rows"] = rows;
    doc["tail_mass"] = 1.0 - listed;
    if (!as_json) {
      auto writer = [&](std::ostream& f) {
        f << "config,weight\n";
        for (const auto& c : configs) f << '"' << c.config.to_string() << "\"," << to_string(c.weight) << '\n';
      };
      run.write(stem + ".csv", writer);
      writer(out);
    }
  } else if (o.which == "Tc") {
    const auto mix = analytics::pmf_Tc_mixture(o.max);
    json rows = json::array();
    for (const auto& c : mix.components) {
      rows.push_back({{"s_from", c.s_from}, {"weight", to_double(c.weight)}, {"exact", to_string(c.weight)}});
    }
    doc["components"] = rows;
    doc["tail_weight"] = mix.tail_weight;
    doc["expected_Tc"] = analytics::expected_Tc();
    if (!as_json) {
      auto writer = [&](std::ostream& f) {
        f << "s_from,weight,tail_weight\n";
        bool first = true;
        for (const auto& c : mix.components) {
          f << c.s_from << ',' << to_string(c.weight) << ',';
          if (first) f << io::format_double(mix.tail_weight);
          f << '\n';
          first = false;
        }
      };
      run.write(stem + ".csv", writer);
      run.write_json(stem + "_mean.json", {{"expected_Tc", analytics::expected_Tc()}});
      writer(out);
      out << "expected_Tc," << io::format_double(analytics::expected_Tc()) << '\n';
    }
  } else {
    throw UsageError("unknown table '" + o.which + "' (expected L, LI, K, Z, pi or Tc)");
  }
  if (as_json) {
    run.write_json(stem + ".json", doc);
    out << doc.dump(2) << '\n';
  }
  run.finish();
  return kOk;
}

int cmd_verify(const VerifyOptions& o, Run& run, std::ostream& out) {
  verification::SuiteOptions opt;
  opt.profile = verification::parse_profile(o.profile);
  opt.seed = run.manifest.seed;
  opt.only = o.only;
  for (int id : o.only) {
    if (id < 1 || id > verification::kCriterionCount) throw UsageError("--only: no criterion " + std::to_string(id));
  }
  const auto report = verification::run_suite(opt, [&](const verification::CriterionResult& r) {
    out << r.summary_line() << '\n' << std::flush;
  });
  run.write_json("report.json", report.to_json());
  run.finish();
  out << "overall " << (report.pass() ? "PASS" : "FAIL") << '\n';
  return report.pass() ? kOk : kCheckFailure;
}

int dispatch(const std::string& command, const json& config, const fs::path& out_dir,
             std::optional<std::uint64_t> seed, std::ostream& out) {
  Run run = begin(command, config, out_dir, seed);
  if (command == "simulate-lookdown") return cmd_simulate_lookdown(config.get<LookdownOptions>(), run, out);
  if (command == "simulate-particles") return cmd_simulate_particles(config.get<ParticleOptions>(), run, out);
  if (command == "tables") return cmd_tables(config.get<TablesOptions>(), run, out);
  if (command == "verify") return cmd_verify(config.get<VerifyOptions>(), run, out);
  throw UsageError("unknown command '" + command + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MRCA process of the look-down model: simulation, exact tables and verification", "mrca"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string out_dir = default_out_dir().string();
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub, bool with_seed) {
    sub->add_option("--out", out_dir, std::string("Output directory (default $") + kOutDirEnv + " or ./mrca_out)");
    if (with_seed) return sub->add_option("--seed", seed, "Master seed; drawn from entropy when absent");
    return static_cast<CLI::Option*>(nullptr);
  };

  LookdownOptions lo;
  auto* sl = app.add_subcommand("simulate-lookdown", "Simulate the look-down process and its MRCA point process");
  sl->add_option("--levels", lo.levels, "Number of levels N")->capture_default_str();
  sl->add_option("--t-start", lo.t_start, "Window start")->capture_default_str();
  sl->add_option("--t-end", lo.t_end, "Window end")->capture_default_str();
  sl->add_option("--burn-in", lo.burn_in, "Burn-in before the window")->capture_default_str();
  sl->add_option("--format", lo.format, "Event log format")->check(CLI::IsMember({"csv", "jsonl"}))->capture_default_str();
  sl->add_option("--event-levels", lo.event_levels, "Log events with destination level <= this")->capture_default_str();
  sl->add_option("--sample-spacing", lo.sample_spacing, "Spacing of observable samples")->capture_default_str();
  sl->add_option("--theta", lo.theta, "Mutation rate; writes substitutions.csv when > 0")->capture_default_str();
  auto* sl_seed = add_common(sl, true);

  ParticleOptions po;
  auto* sp = app.add_subcommand("simulate-particles", "Simulate the fixation-curve particle system");
  sp->add_option("--cap", po.cap, "Particle cap M")->capture_default_str();
  sp->add_option("--horizon", po.horizon, "Simulated time after burn-in")->capture_default_str();
  sp->add_option("--burn-in", po.burn_in, "Simulated time discarded before the horizon")->capture_default_str();
  sp->add_option("--init", po.init, "Initial configuration")->check(CLI::IsMember({"empty", "stationary"}))->capture_default_str();
  sp->add_option("--format", po.format, "Trajectory format")->check(CLI::IsMember({"csv", "jsonl"}))->capture_default_str();
  bool no_trajectory = false;
  sp->add_flag("--no-trajectory", no_trajectory, "Do not record the trajectory");
  sp->add_flag("--residual-exit-time", po.residual_exit_time, "Add the residual climb time above the cap to exits");
  auto* sp_seed = add_common(sp, true);

  TablesOptions to;
  auto* tb = app.add_subcommand("tables", "Write exact tables");
  tb->add_option("--which", to.which, "Table")->check(CLI::IsMember({"L", "LI", "K", "Z", "pi", "Tc"}))->required();
  tb->add_option("--max", to.max, "Largest value listed (L, LI, Z, pi leading level, Tc level)")->capture_default_str();
  tb->add_option("--level", to.level, "L for LI, j for K, particle count bound for pi")->capture_default_str();
  tb->add_option("--format", to.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  add_common(tb, false);

  VerifyOptions vo;
  auto* vf = app.add_subcommand("verify", "Run the acceptance suite");
  vf->add_option("--profile", vo.profile, "Suite profile")->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
  vf->add_option("--only", vo.only, "Run only these criteria (1..11)");
  auto* vf_seed = add_common(vf, true);

  std::string manifest_path;
  auto* rp = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  rp->add_option("manifest", manifest_path, "manifest.json of an earlier run")->required();
  rp->add_option("--out", out_dir, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*rp) {
      json manifest;
      try {
        std::ifstream in(manifest_path, std::ios::binary);
        if (!in) throw io::IoError("cannot open " + manifest_path);
        manifest = json::parse(in);
      } catch (const json::exception& e) {
        throw UsageError(std::string("malformed manifest: ") + e.what());
      }
      if (rp->count("--out") == 0) out_dir = (fs::path(manifest_path).parent_path() / "replay").string();
      return dispatch(manifest.at("command").get<std::string>(), manifest.at("config"), out_dir,
                      manifest.at("seed").get<std::uint64_t>(), out);
    }
    auto seed_of = [&](CLI::Option* opt) {
      return opt != nullptr && opt->count() > 0 ? std::optional<std::uint64_t>(seed) : std::nullopt;
    };
    if (*sl) return dispatch("simulate-lookdown", lo, out_dir, seed_of(sl_seed), out);
    if (*sp) {
      po.trajectory = !no_trajectory;
      return dispatch("simulate-particles", po, out_dir, seed_of(sp_seed), out);
    }
    if (*tb) return dispatch("tables", to, out_dir, 0, out);
    if (*vf) return dispatch("verify", vo, out_dir, seed_of(vf_seed), out);
  } catch (const io::IoError& e) {
    err << "mrca: I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const json::exception& e) {
    err << "mrca: invalid configuration: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "mrca: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "mrca: error: " << e.what() << '\n';
    return kCheckFailure;
  }
  return kUsage;
}

}  // namespace mrca::cli
