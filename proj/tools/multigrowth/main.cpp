#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "multigrowth/analytics.hpp"
#include "multigrowth/engine.hpp"
#include "multigrowth/errors.hpp"
#include "multigrowth/game.hpp"
#include "multigrowth/tails.hpp"

#include "run_output.hpp"

namespace {

namespace mg = multigrowth;
using mg::cli::CsvFile;
using mg::cli::fmt17;
using mg::cli::RunContext;
using nlohmann::json;

constexpr int kExitBadParams = 2;   // invalid parameters or domain violations
constexpr int kExitExtinct = 3;     // a rate was requested but the ensemble died
constexpr int kExitUnresolved = 4;  // root missing or budget exhausted

constexpr std::uint64_t kDefaultSeed = 123456789;

// Accepts plain decimals and num/den fractions; 1/3 has no finite decimal
// form and the reference parameter sets need it exact.
double parse_real(const std::string& text) {
  const auto plain = [](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size())
      throw std::invalid_argument("not a number: '" + s + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return plain(text);
  const double den = plain(text.substr(slash + 1));
  if (den == 0.0) throw std::invalid_argument("zero denominator in '" + text + "'");
  return plain(text.substr(0, slash)) / den;
}

std::int64_t parse_int(const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw std::invalid_argument("not an integer: '" + text + "'");
  return v;
}

// Group-size lists: comma-separated entries, each a value or an inclusive
// lo-hi range, e.g. "3", "4,8,16,32", "1-10".
std::vector<std::int64_t> parse_n_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    if (item.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
    const std::size_t dash = item.find('-', 1);  // allow a leading minus to fail parse_int below
    if (dash == std::string::npos) {
      out.push_back(parse_int(item));
    } else {
      const std::int64_t lo = parse_int(item.substr(0, dash));
      const std::int64_t hi = parse_int(item.substr(dash + 1));
      if (hi < lo) throw std::invalid_argument("descending range '" + item + "'");
      for (std::int64_t n = lo; n <= hi; ++n) out.push_back(n);
    }
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

// Sweep grids: "start:stop:step", endpoints included up to rounding slack.
std::vector<double> parse_grid(const std::string& text) {
  const std::size_t c1 = text.find(':');
  const std::size_t c2 = text.find(':', c1 == std::string::npos ? 0 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw std::invalid_argument("grid must be start:stop:step, got '" + text + "'");
  const double start = parse_real(text.substr(0, c1));
  const double stop = parse_real(text.substr(c1 + 1, c2 - c1 - 1));
  const double step = parse_real(text.substr(c2 + 1));
  if (!(step > 0.0) || stop < start)
    throw std::invalid_argument("grid needs stop >= start and step > 0");
  std::vector<double> out;
  const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9));
  for (std::int64_t i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::uint64_t parse_seed(const std::string& text) {
  if (text.empty()) return kDefaultSeed;
  if (text == "random") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw std::invalid_argument("seed must be an unsigned integer or 'random'");
  return v;
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("MULTIGROWTH_THREADS")) {
    try {
      const std::int64_t v = parse_int(env);
      if (v > 0) return static_cast<int>(v);
    } catch (const std::exception&) {
      // fall through to the default; a broken env var should not kill runs
    }
  }
  return 1;
}

json rate_estimate_json(const mg::RateEstimate& est) {
  return json{{"rate", est.rate},
              {"std_error", est.std_error},
              {"replicas_used", est.replicas_used},
              {"horizon_used", est.horizon_used},
              {"extinct", est.extinct}};
}

void write_trajectory_csv(RunContext& ctx, const mg::TrajectoryRecord& traj) {
  CsvFile f = ctx.csv("trajectory.csv", "t,mean_log_wealth,log_mean_wealth,survivors");
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    f.row(std::to_string(traj.times[i]) + ',' + fmt17(traj.mean_log_wealth[i]) + ',' +
          fmt17(traj.log_mean_wealth[i]) + ',' + std::to_string(traj.survivors[i]));
  }
  f.close();
}

// ---------------------------------------------------------------- rates ----

struct RatesOpts {
  std::string a, b, p;
  std::int64_t nmax = 20;
  bool csv_only = false;
  bool json_only = false;
  std::string out = ".";
};

int run_rates(const RatesOpts& o, const std::vector<std::string>& argv) {
  const mg::GameParams g(parse_real(o.a), parse_real(o.b), parse_real(o.p));
  if (o.nmax < 1) throw std::invalid_argument("--nmax must be >= 1");

  RunContext ctx(o.out, "rates", argv, 0);
  ctx.parameters(json{{"a", g.a()}, {"b", g.b()}, {"p", g.p()}, {"n_max", o.nmax}});

  std::vector<double> rates(static_cast<std::size_t>(o.nmax) + 1, 0.0);
  for (std::int64_t n = 1; n <= o.nmax; ++n)
    rates[static_cast<std::size_t>(n)] = mg::analytics::shared_rate(g, n);
  const auto n_crit = mg::analytics::n_critical(g, o.nmax);
  const double r_geo = mg::analytics::geometric_rate(g);
  const double r_lim = mg::analytics::shared_rate_limit(g);

  if (!o.json_only) {
    CsvFile f = ctx.csv("rates.csv", "n,rate");
    for (std::int64_t n = 1; n <= o.nmax; ++n)
      f.row(std::to_string(n) + ',' + fmt17(rates[static_cast<std::size_t>(n)]));
    f.close();
  }
  if (!o.csv_only) {
    ctx.write_json("summary.json",
                   json{{"geometric_rate", r_geo},
                        {"arithmetic_mean", mg::analytics::arithmetic_mean(g)},
                        {"shared_rate_limit", r_lim},
                        {"n_critical", n_crit ? json(*n_crit) : json(nullptr)}});
  }
  ctx.finish();

  std::cout << "geometric rate    " << fmt17(r_geo) << '\n'
            << "shared rate limit " << fmt17(r_lim) << '\n';
  if (n_crit)
    std::cout << "N_crit = " << *n_crit << '\n';
  else
    std::cout << "N_crit = none up to " << o.nmax << '\n';
  return 0;
}

// ---------------------------------------------------------------- kelly ----

struct KellyOpts {
  std::string p, d;
  std::string n_list = "1";
  std::string sweep = "0:0.99:0.01";
  double tol = 1e-10;
  std::string out = ".";
};

int run_kelly(const KellyOpts& o, const std::vector<std::string>& argv) {
  const double p = parse_real(o.p);
  const double d = parse_real(o.d);
  const auto ns = parse_n_list(o.n_list);
  const auto grid = parse_grid(o.sweep);
  for (const double f : grid)
    if (f < 0.0 || f >= 1.0)
      throw std::invalid_argument("--sweep-f values must lie in [0, 1)");

  RunContext ctx(o.out, "kelly", argv, 0);
  ctx.parameters(json{{"p", p}, {"d", d}, {"n", ns}, {"sweep_f", o.sweep}, {"tol", o.tol}});

  CsvFile sweep = ctx.csv("kelly_sweep.csv", "n,f,rate");
  CsvFile optima = ctx.csv("kelly_optima.csv", "n,f_star,r_max");
  CsvFile danger = ctx.csv("kelly_danger.csv",
                           "n,f_boundary,epsilon_boundary,danger_measure");
  json summary = json::array();

  for (const std::int64_t n : ns) {
    for (const double f : grid) {
      sweep.row(std::to_string(n) + ',' + fmt17(f) + ',' +
                fmt17(mg::analytics::kelly_rate(mg::KellyParams(p, d, f), n)));
    }
    const auto opt = mg::analytics::kelly_optimal_fraction(p, d, n, o.tol);
    optima.row(std::to_string(n) + ',' + fmt17(opt.f_star) + ',' + fmt17(opt.r_max));
    json entry{{"n", n}, {"f_star", opt.f_star}, {"r_max", opt.r_max}};
    if (opt.r_max > 0.0) {
      // Only a growing pool has a safe region to bound.
      const auto region = mg::analytics::safe_fraction_boundary(p, d, n);
      danger.row(std::to_string(n) + ',' + fmt17(region.f_boundary) + ',' +
                 fmt17(region.epsilon_boundary) + ',' + fmt17(region.danger_measure));
      entry["danger_measure"] = region.danger_measure;
    }
    summary.push_back(entry);
    std::cout << "N=" << n << "  f_star=" << fmt17(opt.f_star)
              << "  r_max=" << fmt17(opt.r_max) << '\n';
  }
  sweep.close();
  optima.close();
  danger.close();
  ctx.write_json("summary.json", summary);
  ctx.finish();
  return 0;
}

// ------------------------------------------------------------- simulate ----

struct SimulateOpts {
  std::string mode;
  std::string a, b, p;
  std::string d, f;
  std::int64_t n_players = 1;
  double generosity = 1.0;
  std::int64_t horizon = 1000;
  std::int64_t replicas = 16;
  std::int64_t n0 = 1 << 20;
  std::int64_t burn_in = 0;
  std::string seed;
  int threads = 0;
  std::string out = ".";
};

int run_simulate(const SimulateOpts& o, const std::vector<std::string>& argv) {
  const std::uint64_t seed = parse_seed(o.seed);
  const int threads = resolve_threads(o.threads);
  if (o.mode != "kelly" && (o.a.empty() || o.b.empty()))
    throw std::invalid_argument("simulate " + o.mode + " needs -a, -b and -p");

  if (o.mode == "census") {
    const mg::GameParams g(parse_real(o.a), parse_real(o.b), parse_real(o.p));
    mg::EnsembleSpec spec;
    spec.n_players = 1;
    spec.horizon = o.horizon;
    spec.replicas = 1;
    spec.master_seed = seed;
    RunContext ctx(o.out, "simulate", argv, seed);
    ctx.parameters(json{{"mode", "census"}, {"a", g.a()}, {"b", g.b()}, {"p", g.p()},
                        {"n0", o.n0}, {"horizon", o.horizon}, {"seed", seed}});
    const auto records = mg::survival_census(g, o.n0, spec);
    CsvFile f = ctx.csv("census.csv", "t,survivors,mean_wealth");
    for (const auto& rec : records)
      f.row(std::to_string(rec.time) + ',' + std::to_string(rec.survivors) + ',' +
            fmt17(rec.mean_wealth));
    f.close();
    const bool extinct = records.back().survivors == 0;
    ctx.write_json("summary.json",
                   json{{"mode", "census"},
                        {"extinction_time", extinct ? json(records.back().time) : json(nullptr)},
                        {"final_survivors", records.back().survivors}});
    ctx.finish();
    if (extinct)
      std::cout << "population extinct at t = " << records.back().time << '\n';
    else
      std::cout << "population alive at horizon, survivors = "
                << records.back().survivors << '\n';
    return 0;
  }

  mg::EnsembleSpec spec;
  spec.n_players = o.n_players;
  spec.horizon = o.horizon;
  spec.replicas = o.replicas;
  spec.master_seed = seed;

  mg::TrajectoryRecord traj;
  json params{{"mode", o.mode}, {"n_players", o.n_players}, {"horizon", o.horizon},
              {"replicas", o.replicas}, {"seed", seed}, {"threads", threads},
              {"burn_in", o.burn_in}};
  std::optional<double> analytic;

  if (o.mode == "sync") {
    const mg::GameParams g(parse_real(o.a), parse_real(o.b), parse_real(o.p));
    spec.generosity = o.generosity;
    traj = mg::simulate_sync(g, mg::SharingPolicy{o.generosity, o.n_players}, spec, threads);
    if (o.generosity == 1.0)
      analytic = mg::analytics::shared_rate(g, o.n_players);
    else if (o.generosity == 0.0)
      analytic = mg::analytics::geometric_rate(g);
    params.update(json{{"a", g.a()}, {"b", g.b()}, {"p", g.p()}, {"generosity", o.generosity}});
  } else if (o.mode == "async") {
    const mg::GameParams g(parse_real(o.a), parse_real(o.b), parse_real(o.p));
    spec.update_mode = mg::UpdateMode::asynchronous;
    spec.generosity = 1.0;
    traj = mg::simulate_async(g, o.n_players, spec, threads);
    analytic = mg::analytics::async_rate(g, o.n_players);
    params.update(json{{"a", g.a()}, {"b", g.b()}, {"p", g.p()}});
  } else if (o.mode == "kelly") {
    if (o.d.empty() || o.f.empty())
      throw std::invalid_argument("simulate kelly needs -p, -d and -f");
    const mg::KellyParams kp(parse_real(o.p), parse_real(o.d), parse_real(o.f));
    spec.generosity = 1.0;
    traj = mg::simulate_kelly(kp, o.n_players, spec, threads);
    analytic = mg::analytics::kelly_rate(kp, o.n_players);
    params.update(json{{"p", kp.p()}, {"d", kp.d()}, {"f", kp.f()}});
  } else {
    throw std::invalid_argument("mode must be sync, async, kelly or census");
  }

  RunContext ctx(o.out, "simulate", argv, seed);
  ctx.parameters(params);
  write_trajectory_csv(ctx, traj);
  const mg::RateEstimate est = mg::estimate_growth_rate(traj, o.burn_in);
  json summary{{"mode", o.mode}, {"estimate", rate_estimate_json(est)}};
  summary["analytic_rate"] = analytic ? json(*analytic) : json(nullptr);
  ctx.write_json("summary.json", summary);
  ctx.finish();

  std::cout << "rate = " << fmt17(est.rate) << "  std_error = " << fmt17(est.std_error);
  if (analytic) std::cout << "  analytic = " << fmt17(*analytic);
  std::cout << '\n';
  if (est.extinct) {
    std::cerr << "ensemble reached zero wealth; rate is not meaningful\n";
    return kExitExtinct;
  }
  return 0;
}

// ----------------------------------------------------------- generosity ----

struct GenerosityOpts {
  std::string a, b, p;
  std::string n_list = "3";
  std::string grid = "0:1:0.05";
  bool find_crit = false;
  std::int64_t horizon = 600;
  std::int64_t replicas = 48;
  double tol = 0.0;  // 0 = size-scaled default
  std::string seed;
  int threads = 0;
  std::string out = ".";
};

int run_generosity(const GenerosityOpts& o, const std::vector<std::string>& argv) {
  const mg::GameParams g(parse_real(o.a), parse_real(o.b), parse_real(o.p));
  const auto ns = parse_n_list(o.n_list);
  const std::uint64_t seed = parse_seed(o.seed);
  const int threads = resolve_threads(o.threads);
  const std::int64_t burn_in = o.horizon / 5;

  RunContext ctx(o.out, "generosity", argv, seed);
  ctx.parameters(json{{"a", g.a()}, {"b", g.b()}, {"p", g.p()}, {"n", ns},
                      {"find_crit", o.find_crit}, {"horizon", o.horizon},
                      {"replicas", o.replicas}, {"tol", o.tol}, {"seed", seed},
                      {"threads", threads}});

  if (!o.find_crit) {
    const auto grid = parse_grid(o.grid);
    for (const double dd : grid)
      if (dd < 0.0 || dd > 1.0)
        throw std::invalid_argument("--grid generosity values must lie in [0, 1]");
    CsvFile f = ctx.csv("generosity_curve.csv", "n,generosity,rate,std_error");
    json summary = json::array();
    for (const std::int64_t n : ns) {
      for (const double dd : grid) {
        mg::EnsembleSpec spec;
        spec.n_players = n;
        spec.horizon = o.horizon;
        spec.replicas = o.replicas;
        spec.master_seed = seed;
        spec.generosity = dd;
        const auto traj = mg::simulate_sync(g, mg::SharingPolicy{dd, n}, spec, threads);
        const auto est = mg::estimate_growth_rate(traj, burn_in);
        f.row(std::to_string(n) + ',' + fmt17(dd) + ',' + fmt17(est.rate) + ',' +
              fmt17(est.std_error));
      }
      summary.push_back(json{{"n", n}, {"full_sharing_rate", mg::analytics::shared_rate(g, n)}});
    }
    f.close();
    ctx.write_json("summary.json", summary);
    ctx.finish();
    return 0;
  }

  CsvFile f = ctx.csv("generosity_crit.csv",
                      "n,d_lo,d_hi,d_mid,rate_lo,rate_hi,std_error_lo,std_error_hi");
  json summary = json::array();
  for (const std::int64_t n : ns) {
    // Smaller groups need a coarser default: the root sits near 1/n and the
    // rate difference across the bracket must beat the Monte Carlo noise.
    const double tol = o.tol > 0.0 ? o.tol : std::min(0.5 / static_cast<double>(n), 0.05);
    mg::EnsembleSpec spec;
    spec.n_players = n;
    spec.horizon = o.horizon;
    spec.replicas = o.replicas;
    spec.master_seed = seed;
    const auto crit = mg::critical_generosity(g, n, spec, tol, threads);
    const double mid = 0.5 * (crit.d_lo + crit.d_hi);
    f.row(std::to_string(n) + ',' + fmt17(crit.d_lo) + ',' + fmt17(crit.d_hi) + ',' +
          fmt17(mid) + ',' + fmt17(crit.rate_lo.rate) + ',' + fmt17(crit.rate_hi.rate) +
          ',' + fmt17(crit.rate_lo.std_error) + ',' + fmt17(crit.rate_hi.std_error));
    summary.push_back(json{{"n", n}, {"d_lo", crit.d_lo}, {"d_hi", crit.d_hi},
                           {"d_mid", mid}, {"n_times_d_mid", static_cast<double>(n) * mid}});
    std::cout << "N=" << n << "  D_crit in [" << fmt17(crit.d_lo) << ", "
              << fmt17(crit.d_hi) << "]\n";
  }
  f.close();
  ctx.write_json("summary.json", summary);
  ctx.finish();
  return 0;
}

// ---------------------------------------------------------------- tails ----

struct TailsOpts {
  std::string a, b, p;
  std::int64_t t = 100;
  std::string mode = "beat_one";
  std::int64_t decompose = 0;  // 0 = off
  std::string out = ".";
};

int run_tails(const TailsOpts& o, const std::vector<std::string>& argv) {
  const mg::GameParams g(parse_real(o.a), parse_real(o.b), parse_real(o.p));
  mg::tails::TailMode mode;
  if (o.mode == "beat_one")
    mode = mg::tails::TailMode::beat_one;
  else if (o.mode == "beat_arithmetic")
    mode = mg::tails::TailMode::beat_arithmetic;
  else
    throw std::invalid_argument("--mode must be beat_one or beat_arithmetic");

  RunContext ctx(o.out, "tails", argv, 0);
  ctx.parameters(json{{"a", g.a()}, {"b", g.b()}, {"p", g.p()}, {"t", o.t},
                      {"mode", o.mode}, {"decompose", o.decompose}});

  const auto report = mg::tails::make_tail_report(g, o.t, mode);
  json doc{{"mode", o.mode},
           {"t", report.t},
           {"alpha", report.alpha},
           {"prob_exact", report.prob_exact},
           {"prob_gaussian", report.prob_gaussian},
           {"required_realizations", report.realizations.count},
           {"log_required_realizations", report.realizations.log_count}};

  if (o.decompose > 0) {
    const auto dec = mg::tails::contribution_decomposition(g, o.decompose);
    CsvFile f = ctx.csv("contributions.csv", "n,log_value,log_prob,log_contribution");
    for (const auto& row : dec.rows)
      f.row(std::to_string(row.n) + ',' + fmt17(row.log_value) + ',' +
            fmt17(row.log_prob) + ',' + fmt17(row.log_contribution));
    f.close();
    doc["decomposition"] = json{{"horizon", o.decompose},
                                {"argmax_prob", dec.argmax_prob},
                                {"argmax_contribution", dec.argmax_contribution},
                                {"typical_contribution", dec.typical_contribution}};
  }
  ctx.write_json("tails.json", doc);
  ctx.finish();

  std::cout << "alpha = " << fmt17(report.alpha) << "  prob_exact = "
            << fmt17(report.prob_exact) << "  prob_gaussian = "
            << fmt17(report.prob_gaussian) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> raw_argv(argv, argv + argc);

  CLI::App app{"exact analytics and Monte Carlo for multiplicative growth games"};
  app.require_subcommand(1);

  RatesOpts rates;
  auto* cmd_rates = app.add_subcommand("rates", "group growth rates r_N and N_crit");
  cmd_rates->add_option("-a", rates.a, "win factor (decimal or num/den)")->required();
  cmd_rates->add_option("-b", rates.b, "loss factor")->required();
  cmd_rates->add_option("-p", rates.p, "win probability")->required();
  cmd_rates->add_option("--nmax", rates.nmax, "largest group size");
  cmd_rates->add_flag("--csv", rates.csv_only, "write only the CSV table");
  cmd_rates->add_flag("--json", rates.json_only, "write only the JSON summary");
  cmd_rates->add_option("--out", rates.out, "output directory");

  KellyOpts kelly;
  auto* cmd_kelly = app.add_subcommand("kelly", "staking-fraction sweeps, optima and danger region");
  cmd_kelly->add_option("-p", kelly.p, "win probability")->required();
  cmd_kelly->add_option("-d", kelly.d, "payout per unit staked")->required();
  cmd_kelly->add_option("-N", kelly.n_list, "group sizes (list or lo-hi range)");
  cmd_kelly->add_option("--sweep-f", kelly.sweep, "stake grid start:stop:step");
  cmd_kelly->add_option("--tol", kelly.tol, "optimizer tolerance");
  cmd_kelly->add_option("--out", kelly.out, "output directory");

  SimulateOpts sim;
  auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo trajectories");
  cmd_sim->add_option("mode", sim.mode, "sync | async | kelly | census")->required();
  cmd_sim->add_option("-a", sim.a, "win factor");
  cmd_sim->add_option("-b", sim.b, "loss factor");
  cmd_sim->add_option("-p", sim.p, "win probability")->required();
  cmd_sim->add_option("-d", sim.d, "payout per unit staked (kelly mode)");
  cmd_sim->add_option("-f", sim.f, "staked fraction (kelly mode)");
  cmd_sim->add_option("-N", sim.n_players, "group size");
  cmd_sim->add_option("-D", sim.generosity, "generosity (sync mode)");
  cmd_sim->add_option("-T", sim.horizon, "time steps");
  cmd_sim->add_option("-R", sim.replicas, "replicas");
  cmd_sim->add_option("--n0", sim.n0, "initial population (census mode)");
  cmd_sim->add_option("--burn-in", sim.burn_in, "steps dropped before the rate fit");
  cmd_sim->add_option("--seed", sim.seed, "master seed (integer or 'random')");
  cmd_sim->add_option("--threads", sim.threads, "worker threads (default: MULTIGROWTH_THREADS or 1)");
  cmd_sim->add_option("--out", sim.out, "output directory");

  GenerosityOpts gen;
  auto* cmd_gen = app.add_subcommand("generosity", "rate vs sharing level, critical generosity");
  cmd_gen->add_option("-a", gen.a, "win factor")->required();
  cmd_gen->add_option("-b", gen.b, "loss factor")->required();
  cmd_gen->add_option("-p", gen.p, "win probability")->required();
  cmd_gen->add_option("-N", gen.n_list, "group sizes (list or lo-hi range)");
  cmd_gen->add_option("--grid", gen.grid, "generosity grid start:stop:step");
  cmd_gen->add_flag("--find-crit", gen.find_crit, "bisect for the critical generosity");
  cmd_gen->add_option("-T", gen.horizon, "time steps per candidate");
  cmd_gen->add_option("-R", gen.replicas, "replicas per candidate");
  cmd_gen->add_option("--tol", gen.tol, "bracket width (default scales as 0.5/N)");
  cmd_gen->add_option("--seed", gen.seed, "master seed (integer or 'random')");
  cmd_gen->add_option("--threads", gen.threads, "worker threads");
  cmd_gen->add_option("--out", gen.out, "output directory");

  TailsOpts tails;
  auto* cmd_tails = app.add_subcommand("tails", "growth-threshold probabilities and contribution decomposition");
  cmd_tails->add_option("-a", tails.a, "win factor")->required();
  cmd_tails->add_option("-b", tails.b, "loss factor")->required();
  cmd_tails->add_option("-p", tails.p, "win probability")->required();
  cmd_tails->add_option("-t", tails.t, "horizon");
  cmd_tails->add_option("--mode", tails.mode, "beat_one | beat_arithmetic");
  cmd_tails->add_option("--decompose", tails.decompose, "emit contribution rows for this horizon");
  cmd_tails->add_option("--out", tails.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadParams;
  }

  try {
    if (cmd_rates->parsed()) return run_rates(rates, raw_argv);
    if (cmd_kelly->parsed()) return run_kelly(kelly, raw_argv);
    if (cmd_sim->parsed()) return run_simulate(sim, raw_argv);
    if (cmd_gen->parsed()) return run_generosity(gen, raw_argv);
    if (cmd_tails->parsed()) return run_tails(tails, raw_argv);
  } catch (const mg::NoRootError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnresolved;
  } catch (const mg::BudgetExhaustedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnresolved;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadParams;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadParams;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
