#include "cola/cli.hpp"

#include "cola/error.hpp"
#include "cola/experiments.hpp"
#include "cola/league.hpp"
#include "cola/mechanism.hpp"
#include "cola/rbts.hpp"
#include "cola/records.hpp"
#include "cola/transition.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace cola::cli {

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out_dir;
  int verbosity = 0;

  std::uint64_t effective_seed() {
    if (!seed) {
      std::random_device rd;
      seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    return *seed;
  }

  /// --out, else $COLA_OUT_DIR, else `fallback`.
  fs::path output_dir(const fs::path &fallback = ".") const {
    if (!out_dir.empty()) return out_dir;
    if (const char *env = std::getenv(kOutDirEnv); env && *env) return env;
    return fallback;
  }
};

void print_deltas(std::ostream &out, const std::vector<LedgerDelta> &deltas) {
  out << "team_id,actual,expected,delta\n";
  for (const auto &d : deltas)
    out << d.team_id << ',' << d.actual << ',' << d.expected << ',' << d.actual - d.expected
        << '\n';
}

MechanismConfig mechanism_config(const GlobalOptions &g) {
  return g.config.empty() ? MechanismConfig{} : load_mechanism_config(g.config);
}

sim::SimConfig sim_config(const GlobalOptions &g) {
  if (g.config.empty()) {
    sim::SimConfig cfg;
    cfg.validate();
    return cfg;
  }
  return sim::load_sim_config(g.config);
}

fs::path ensure_dir(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  return dir;
}

int cmd_replay(GlobalOptions &g, const std::string &events_path, const std::string &reference,
               int epoch, bool require_reference, std::ostream &out, std::ostream &err) {
  const auto cfg = mechanism_config(g);
  const auto events = load_event_log(events_path, epoch);
  const auto ledgers = replay_history(events, cfg);
  out << "# seed: " << g.effective_seed() << '\n';
  if (!require_reference) write_ledgers(out, ledgers);
  if (reference.empty()) return kOk;

  const auto ref = load_reference(reference);
  const auto deltas = compare_to_reference(ledgers, ref);
  if (require_reference || !deltas.empty()) {
    out << "# reference: " << (ref.label.empty() ? reference : ref.label) << '\n';
    print_deltas(out, deltas);
  }
  if (g.verbosity > 0)
    err << events.size() << " events, " << ledgers.size() << " teams, " << deltas.size()
        << " deltas\n";
  if (!deltas.empty()) {
    err << deltas.size() << " team(s) differ from the reference\n";
    return kReferenceMismatch;
  }
  if (require_reference) out << "# all " << ref.entries.size() << " teams match\n";
  return kOk;
}

int cmd_lottery(GlobalOptions &g, const std::string &state_path, const std::string &line_name,
                bool increment, std::ostream &out, std::ostream &err) {
  const auto cfg = mechanism_config(g);
  const auto seed = g.effective_seed();
  const auto line = [&] {
    try {
      return parse_line_level(line_name);
    } catch (const ArgumentError &e) {
      throw ConfigError(e.what());
    }
  }();
  const auto state = parse_lottery_state(read_csv(state_path));

  const bool known = std::any_of(state.outcomes.begin(), state.outcomes.end(),
                                 [](const SeasonOutcome &o) { return o.pick_won.has_value(); });
  if (known) {
    // Picks already drawn: bookkeeping only.
    auto ledgers = state.ledgers;
    if (increment) ledgers = increment_indices(ledgers, state.outcomes, line, cfg);
    validate_season(ledgers, state.outcomes);
    const auto after = apply_postseason(ledgers, state.outcomes, line, cfg);
    out << "# seed: " << seed << '\n';
    out << "# lottery picks taken from the snapshot\n";
    write_ledgers(out, after);
    return kOk;
  }

  Rng rng = Rng(seed).fork("lottery");
  const auto result = increment ? apply_season(state.ledgers, state.outcomes, state.ownerships,
                                               line, rng, cfg)
                                : run_draft(state.ledgers, state.outcomes, state.ownerships,
                                            line, rng, cfg);
  out << "# seed: " << seed << '\n';
  write_draft_order(out, result.draft_order);

  const fs::path in(state_path);
  const fs::path dir = ensure_dir(g.output_dir(in.parent_path().empty() ? "." : in.parent_path()));
  const auto ledger_path = dir / (in.stem().string() + ".ledgers.csv");
  std::ostringstream ledgers;
  write_ledgers(ledgers, result.ledgers);
  write_file(ledger_path, ledgers.str());
  if (g.verbosity > 0) err << "ledgers written to " << ledger_path.string() << '\n';
  return kOk;
}

int cmd_rbts(GlobalOptions &g, const std::string &responses_path, double budget,
             std::ostream &out, std::ostream &err) {
  const auto seed = g.effective_seed();
  const auto responses = rbts::load_responses(responses_path);

  std::vector<std::string> problems;
  for (const auto &r : responses) {
    try {
      rbts::validate_response(r);
    } catch (const ValidationError &e) {
      problems.push_back(e.what());
    }
  }
  if (!problems.empty()) {
    for (const auto &p : problems) err << "invalid response: " << p << '\n';
    return kDomainValidation;
  }

  const auto round = rbts::score_round(responses, budget, seed);
  out << "# seed: " << seed << '\n';
  out << "agent_id,prediction_score,information_score,payment\n";
  char buf[128];
  for (const auto &a : round.agents) {
    std::snprintf(buf, sizeof buf, "%.9f,%.9f,%.2f", a.prediction, a.information, a.payment);
    out << a.agent_id << ',' << buf << '\n';
  }
  out << "# line: " << to_string(round.line) << '\n';
  return kOk;
}

int cmd_simulate(GlobalOptions &g, int seasons, int replicates, std::ostream &out,
                 std::ostream &err) {
  if (seasons < 1 || replicates < 1) throw ConfigError("seasons and replicates must be positive");
  const auto cfg = sim_config(g);
  const auto seed = g.effective_seed();
  const auto dir = ensure_dir(g.output_dir());

  std::vector<std::string> files(static_cast<std::size_t>(replicates));
  std::vector<std::string> tables(files.size());
  auto run_one = [&](int r) {
    auto state = sim::make_initial_state(cfg, derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::ostringstream csv;
    sim::write_season_header(csv);
    for (int s = 0; s < seasons; ++s) sim::write_season_rows(csv, sim::simulate_season(state, cfg));
    char name[64];
    std::snprintf(name, sizeof name, "seasons_rep%03d.csv", r);
    files[r] = name;
    tables[r] = csv.str();
  };
  const int workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(workers, replicates); ++w)
    pool.emplace_back([&, w] {
      for (int r = w; r < replicates; r += workers) run_one(r);
    });
  for (auto &t : pool) t.join();

  out << "# seed: " << seed << '\n';
  out << "replicate,file,records\n";
  for (int r = 0; r < replicates; ++r) {
    write_file(dir / files[r], tables[r]);
    out << r << ',' << files[r] << ',' << seasons * cfg.n_teams << '\n';
  }
  if (g.verbosity > 0) err << "wrote " << replicates << " file(s) to " << dir.string() << '\n';
  return kOk;
}

int cmd_experiment(GlobalOptions &g, const std::string &name, int seasons, int replicates,
                   std::ostream &out, std::ostream &err) {
  const auto cfg = sim_config(g);
  const auto seed = g.effective_seed();
  experiments::RunOptions opts;
  opts.seasons = seasons;
  opts.replicates = replicates;
  experiments::ExperimentReport rep;
  try {
    rep = experiments::run_experiment(name, cfg, seed, opts);
  } catch (const ArgumentError &e) {
    throw ConfigError(e.what());
  }
  const auto dir = ensure_dir(g.output_dir());
  write_file(dir / (name + ".csv"), rep.csv);
  write_file(dir / (name + "_summary.txt"), rep.summary_text());
  write_file(dir / (name + "_config.json"), rep.config_json + "\n");
  out << "# seed: " << seed << '\n' << rep.summary_text();
  if (g.verbosity > 0) err << "wrote " << (dir / (name + ".csv")).string() << '\n';
  return kOk;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"COLA draft mechanism: history replay, lottery draws, survey scoring and league "
               "simulation"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master seed (generated and printed when omitted)");
  app.add_option("--config", g.config,
                 "Config file (JSON): mechanism config for replay/verify/lottery, "
                 "simulation config for simulate/experiments");
  app.add_option("--out", g.out_dir,
                 std::string("Output directory (default: $") + kOutDirEnv + " or .)");
  app.add_flag("-v,--verbose", g.verbosity, "More diagnostics on stderr");

  std::string events, reference, state, line = "no_move", responses, exp_name;
  int epoch = kDefaultEpoch, seasons = 0, replicates = 1;
  bool increment = false;
  double budget = 0.0;

  auto *replay = app.add_subcommand("replay", "Rebuild lottery indices from an event log");
  replay->add_option("--events", events, "Event log (season,team_id,result,pick_won)")->required();
  replay->add_option("--reference", reference, "Expected ledger (team_id,lottery_index)");
  replay->add_option("--epoch", epoch, "First season of the log");

  auto *verify = app.add_subcommand("verify", "Replay an event log and compare to a reference");
  verify->add_option("--events", events, "Event log")->required();
  verify->add_option("--reference", reference, "Expected ledger")->required();
  verify->add_option("--epoch", epoch, "First season of the log");

  auto *lottery = app.add_subcommand("lottery", "Run the draft lottery on a pre-draft snapshot");
  lottery->add_option("--state", state,
                      "Snapshot: team_id,lottery_index,result,wins[,opted_out,pick_holder,"
                      "protection,pick_won]")
      ->required();
  lottery->add_option("--line", line, "Line level (no_move, include_R1_losers, ...)");
  lottery->add_flag("--increment", increment,
                    "Apply this season's increment first (snapshot predates it)");

  auto *rbts_cmd = app.add_subcommand("rbts", "Media survey scoring");
  rbts_cmd->require_subcommand(1);
  auto *score = rbts_cmd->add_subcommand("score", "Score a survey round and set the line");
  score->add_option("--responses", responses, "Responses (agent_id,conflict_group,choice,p1..p6)")
      ->required();
  score->add_option("--budget", budget, "Budget to distribute")->required();

  auto *simulate = app.add_subcommand("simulate", "Simulate seasons and stream season records");
  int sim_seasons = 100;
  simulate->add_option("--seasons", sim_seasons, "Seasons per replicate");
  simulate->add_option("--replicates", replicates, "Independent replicates");

  auto *exps = app.add_subcommand("experiments", "Seeded Monte Carlo experiments");
  exps->require_subcommand(1);
  auto *exp_run = exps->add_subcommand("run", "Run one experiment");
  exp_run->add_option("name", exp_name, "avg_draft_pick | streaks | index_trajectories | "
                                        "manipulation_benefit")
      ->required();
  int exp_replicates = 0;
  exp_run->add_option("--seasons", seasons, "Override the season count");
  exp_run->add_option("--replicates", exp_replicates, "Override the replicate count (streaks)");

  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kIoOrConfig;
  }

  try {
    if (*replay) return cmd_replay(g, events, reference, epoch, false, out, err);
    if (*verify) return cmd_replay(g, events, reference, epoch, true, out, err);
    if (*lottery) return cmd_lottery(g, state, line, increment, out, err);
    if (*score) return cmd_rbts(g, responses, budget, out, err);
    if (*simulate) return cmd_simulate(g, sim_seasons, replicates, out, err);
    if (*exp_run) return cmd_experiment(g, exp_name, seasons, exp_replicates, out, err);
  } catch (const IoError &e) {
    err << "error: " << e.what() << '\n';
    return kIoOrConfig;
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << '\n';
    return kIoOrConfig;
  } catch (const ParseError &e) {
    err << "parse error: " << e.what() << '\n';
    return kIoOrConfig;
  } catch (const Error &e) {
    err << "validation error: " << e.what() << '\n';
    return kDomainValidation;
  }
  return kOk;
}

} // namespace cola::cli
