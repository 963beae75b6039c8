#include "kinex/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <regex>
#include <sstream>

#include "kinex/error.hpp"
#include "kinex/fit.hpp"
#include "kinex/io.hpp"
#include "kinex/metrics.hpp"
#include "kinex/simulation.hpp"
#include "kinex/sweep.hpp"

namespace kinex::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

/// Bad flags or config found after CLI11 has finished parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw UsageError(what + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

struct SimulateArgs {
  std::string model;
  std::size_t n = 1000;
  std::uint64_t t_max = 1'000'000;
  double lambda = 0.0;
  std::optional<double> xi;
  std::optional<std::uint64_t> tp;
  std::optional<double> gamma;
  std::uint64_t seed = 0;
  double initial_wealth = 1.0;
  std::string snapshots;
  std::string checkpoints = "60,log";
  std::string out;
};

SimConfig build_sim_config(const SimulateArgs& a) {
  SimConfig c;
  c.model.kind = parse_model_kind(a.model);
  c.model.lambda = a.lambda;
  c.model.xi = a.xi;
  c.model.tp = a.tp;
  c.model.gamma = a.gamma;
  c.n_agents = a.n;
  c.t_max = a.t_max;
  c.seed = a.seed;
  c.initial_wealth = a.initial_wealth;

  const auto cp = split_list(a.checkpoints);
  if (cp.size() != 2 || (cp[1] != "log" && cp[1] != "linear")) {
    throw UsageError("--checkpoints: expected <count>,log|linear, got '" + a.checkpoints + "'");
  }
  const auto count = parse_u64(cp[0], "--checkpoints");
  if (a.t_max >= 1) {
    c.checkpoint_times = checkpoint_schedule(a.t_max, static_cast<std::size_t>(count),
                                             cp[1] == "log" ? Spacing::Log : Spacing::Linear);
  }
  for (const std::string& s : split_list(a.snapshots)) {
    c.snapshot_times.push_back(parse_u64(s, "--snapshots"));
  }
  std::sort(c.snapshot_times.begin(), c.snapshot_times.end());
  c.snapshot_times.erase(std::unique(c.snapshot_times.begin(), c.snapshot_times.end()),
                         c.snapshot_times.end());
  c.validate();
  return c;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const std::string started = io::utc_timestamp();
  const SimConfig config = build_sim_config(a);
  const SimRecord record = run_simulation(config);

  io::OutputSet files(a.out);
  files.add("timeseries.csv", io::timeseries_csv(record));
  for (const Snapshot& s : record.snapshots) {
    files.add("snapshot_" + io::format_number(s.t) + ".csv", io::snapshot_csv(s));
  }
  files.add("summary.json", io::summary_json(record));
  files.commit(io::config_json(config), started);
  out << "final g = " << io::format_number(record.final_gini)
      << ", f = " << io::format_number(record.final_f) << "\n";
  return kOk;
}

struct SweepArgs {
  std::string grid;
  std::optional<std::size_t> replicates;
  int jobs = 0;
  std::string out;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const std::string started = io::utc_timestamp();
  std::string text;
  try {
    text = io::read_file(a.grid);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
  SweepGrid grid = io::parse_grid_config(text);
  if (a.replicates) grid.replicates = *a.replicates;
  grid.validate();
  const int jobs = a.jobs > 0 ? a.jobs : default_jobs();

  const auto rows = run_sweep(grid, jobs);
  const auto summary = aggregate(rows);

  io::OutputSet files(a.out);
  files.add("sweep.csv", io::sweep_csv(rows));
  files.add("aggregate.csv", io::aggregate_csv(summary));
  files.commit(ordered_json::parse(io::serialize_grid(grid)), started);
  out << rows.size() << " runs over " << summary.size() << " grid points\n";
  return kOk;
}

struct FitArgs {
  std::string family;
  std::string input;
  std::string x_col;
  std::string y_col;
  bool group_mean = false;
  std::string out;
};

int cmd_fit(const FitArgs& a, std::ostream& out) {
  const std::string started = io::utc_timestamp();
  std::string text;
  try {
    text = io::read_file(a.input);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--input: ") + e.what());
  }
  const io::CsvTable table = io::parse_csv(text);
  const auto xc = table.column(a.x_col);
  const auto yc = table.column(a.y_col);
  if (!xc) throw UsageError("--x-col: column '" + a.x_col + "' not in " + a.input);
  if (!yc) throw UsageError("--y-col: column '" + a.y_col + "' not in " + a.input);

  std::vector<XY> points;
  std::size_t skipped = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row[*xc].empty() || row[*yc].empty()) {
      ++skipped;
      continue;
    }
    const std::string where = "row " + std::to_string(r + 1);
    points.push_back({io::parse_number(row[*xc], where + " column '" + a.x_col + "'"),
                      io::parse_number(row[*yc], where + " column '" + a.y_col + "'")});
  }
  if (a.group_mean) {
    std::vector<std::pair<double, std::pair<double, std::size_t>>> groups;
    for (const XY& p : points) {
      auto it = std::find_if(groups.begin(), groups.end(),
                             [&](const auto& g) { return g.first == p.x; });
      if (it == groups.end()) {
        groups.push_back({p.x, {p.y, 1}});
      } else {
        it->second.first += p.y;
        ++it->second.second;
      }
    }
    points.clear();
    for (const auto& [x, acc] : groups) {
      points.push_back({x, acc.first / static_cast<double>(acc.second)});
    }
  }

  const FitResult fit =
      a.family == "saturation" ? fit_saturation(points) : fit_logarithmic(points);
  if (fit.degenerate) {
    throw Error(ErrorKind::DegenerateInput, "all y values are equal; R^2 undefined");
  }

  ordered_json j = io::fit_json(fit);
  j["x_col"] = a.x_col;
  j["y_col"] = a.y_col;
  j["group_mean"] = a.group_mean;
  j["skipped_rows"] = skipped;

  io::OutputSet files(a.out);
  files.add("fit.json", j.dump(2) + '\n');
  ordered_json echo = {{"family", a.family}, {"input", a.input},   {"x_col", a.x_col},
                       {"y_col", a.y_col},   {"group_mean", a.group_mean}};
  files.commit(echo, started);
  out << to_string(fit.family) << ": " << io::format_number(fit.c0) << ", "
      << io::format_number(fit.c1) << " (R^2 = " << io::format_number(fit.r_squared) << ")\n";
  return kOk;
}

struct FiguresArgs {
  std::string run_dir;
  std::string sweep;
  double lambda = 0.25;
  std::string tp_list = "625,1250,2500,5000";
  std::size_t bins = 50;
  std::string out;
};

int cmd_figures(const FiguresArgs& a, std::ostream& out) {
  const std::string started = io::utc_timestamp();
  io::OutputSet files(a.out);

  if (!a.run_dir.empty()) {
    const fs::path dir(a.run_dir);
    if (!fs::is_directory(dir)) throw UsageError("--run: not a directory: " + a.run_dir);
    const io::CsvTable ts = io::parse_csv(io::read_file(dir / "timeseries.csv"));
    io::CsvTable fig3{{"t", "gini"}, {}};
    const auto tc = ts.column("t");
    const auto gc = ts.column("gini");
    if (!tc || !gc) throw UsageError("timeseries.csv lacks t/gini columns");
    for (const auto& row : ts.rows) fig3.rows.push_back({row[*tc], row[*gc]});
    files.add("fig3_gini_vs_t.csv", fig3.to_string());

    std::vector<fs::path> snaps;
    static const std::regex snap_re("snapshot_([0-9]+)\\.csv");
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (std::regex_match(entry.path().filename().string(), snap_re)) {
        snaps.push_back(entry.path());
      }
    }
    std::sort(snaps.begin(), snaps.end());
    for (const fs::path& p : snaps) {
      const io::CsvTable snap = io::parse_csv(io::read_file(p));
      const auto wc = snap.column("wealth");
      if (!wc) throw UsageError(p.string() + " lacks a wealth column");
      std::vector<double> wealth;
      for (std::size_t r = 0; r < snap.rows.size(); ++r) {
        wealth.push_back(io::parse_number(snap.rows[r][*wc], p.string() + " row " +
                                                                  std::to_string(r + 1)));
      }
      const std::string stem = p.stem().string().substr(std::string("snapshot_").size());
      for (BinScheme scheme : {BinScheme::Linear, BinScheme::Logarithmic}) {
        HistogramOptions opt;
        opt.scheme = scheme;
        opt.n_bins = a.bins;
        const Histogram h = histogram(wealth, opt);
        files.add("fig2_hist_" + stem + (scheme == BinScheme::Linear ? "_linear" : "_log") +
                      ".csv",
                  io::histogram_csv(h));
      }
    }
  }

  if (!a.sweep.empty()) {
    const auto rows = io::parse_sweep_csv(io::parse_csv(io::read_file(a.sweep)));
    const auto summary = aggregate(rows);
    io::CsvTable fig4{{"lambda", "x", "mean_g", "mean_f"}, {}};
    io::CsvTable fig5{{"lambda", "x", "mean_g", "sd_g", "n"}, {}};
    io::CsvTable fig6{{"lambda", "x", "mean_f_over_g", "sd_f_over_g", "mean_f_over_mean_g"}, {}};
    std::vector<XY> fg_points;
    for (const PointSummary& s : summary) {
      const auto x = s.model.kind == ModelKind::Ex ? x_ex(s.model) : x_nx(s.model);
      if (!x) continue;
      const std::string lam = io::format_number(s.model.lambda);
      const std::string xs = io::format_number(*x);
      fig4.rows.push_back({lam, xs, io::format_number(s.g.mean), io::format_number(s.f.mean)});
      fig5.rows.push_back({lam, xs, io::format_number(s.g.mean), io::format_number(s.g.sd),
                           io::format_number(static_cast<std::uint64_t>(s.g.n))});
      fig6.rows.push_back({lam, xs, s.f_over_g ? io::format_number(s.f_over_g->mean) : "",
                           s.f_over_g ? io::format_number(s.f_over_g->sd) : "",
                           s.ratio_of_means ? io::format_number(*s.ratio_of_means) : ""});
      if (s.f_over_g) fg_points.push_back({*x, s.f_over_g->mean});
    }
    files.add("fig4_surface.csv", fig4.to_string());
    files.add("fig5_g_vs_x.csv", fig5.to_string());
    files.add("fig6_fg_vs_x.csv", fig6.to_string());

    ordered_json fits = ordered_json::object();
    for (FitFamily family : {FitFamily::Saturation, FitFamily::Logarithmic}) {
      try {
        const FitResult fit = family == FitFamily::Saturation ? fit_saturation(fg_points)
                                                              : fit_logarithmic(fg_points);
        fits[std::string(to_string(family))] = io::fit_json(fit);
      } catch (const Error& e) {
        fits[std::string(to_string(family))] = {{"error", e.what()}};
      }
    }
    files.add("fig6_fits.json", fits.dump(2) + '\n');
  }

  io::CsvTable fig7{{"tp", "gamma", "x", "xi", "xi_raw", "out_of_range"}, {}};
  for (const std::string& tp_text : split_list(a.tp_list)) {
    const auto tp = parse_u64(tp_text, "--tp-list");
    for (int k = 0; k <= 100; ++k) {
      const double gamma = k / 100.0;
      const XiEquivalence eq = xi_gamma_equivalence(a.lambda, static_cast<double>(tp), gamma);
      fig7.rows.push_back({io::format_number(tp), io::format_number(gamma),
                           io::format_number((1.0 - a.lambda) * gamma), io::format_number(eq.xi),
                           io::format_number(eq.raw), eq.out_of_range ? "1" : "0"});
    }
  }
  files.add("fig7_xi_vs_gamma.csv", fig7.to_string());

  ordered_json echo = {{"run", a.run_dir},         {"sweep", a.sweep}, {"lambda", a.lambda},
                       {"tp_list", a.tp_list},     {"bins", a.bins}};
  files.commit(echo, started);
  out << "wrote figure datasets to " << a.out << "\n";
  return kOk;
}

}  // namespace

int default_jobs() {
  if (const char* env = std::getenv("KINEX_JOBS")) {
    int v = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) return v;
  }
  return std::max(1, omp_get_max_threads());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kinetic wealth-exchange Monte Carlo laboratory", "kinex"};
  app.require_subcommand(1);
  app.set_version_flag("--version", io::kToolVersion);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one simulation");
  simulate->add_option("--model", sim.model, "basic | ex | nx")
      ->required()
      ->check(CLI::IsMember({"basic", "ex", "nx"}));
  simulate->add_option("--n", sim.n, "Number of agents")->capture_default_str();
  simulate->add_option("--t-max", sim.t_max, "Exchange events")->capture_default_str();
  simulate->add_option("--lambda", sim.lambda, "Saving rate")->required();
  simulate->add_option("--xi", sim.xi, "Redistribution transfer rate (ex)");
  simulate->add_option("--tp", sim.tp, "Redistribution period in events (ex)");
  simulate->add_option("--gamma", sim.gamma, "Surplus contribution rate (nx)");
  simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  simulate->add_option("--initial-wealth", sim.initial_wealth)->capture_default_str();
  simulate->add_option("--snapshots", sim.snapshots, "Comma list of event indices");
  simulate->add_option("--checkpoints", sim.checkpoints, "<count>,log|linear")
      ->capture_default_str();
  simulate->add_option("--out", sim.out, "Output directory")->required();

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid");
  sweep->add_option("--grid", sw.grid, "Grid config (JSON)")->required();
  sweep->add_option("--replicates", sw.replicates, "Override the grid's replicate count")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", sw.jobs, "Worker threads (default $KINEX_JOBS)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out", sw.out, "Output directory")->required();

  FitArgs ft;
  auto* fit = app.add_subcommand("fit", "Fit a saturation or logarithmic curve");
  fit->add_option("--family", ft.family)->required()->check(CLI::IsMember({"saturation", "log"}));
  fit->add_option("--input", ft.input, "CSV file")->required();
  fit->add_option("--x-col", ft.x_col)->required();
  fit->add_option("--y-col", ft.y_col)->required();
  fit->add_flag("--group-mean", ft.group_mean, "Average rows sharing an x value first");
  fit->add_option("--out", ft.out, "Output directory")->required();

  FiguresArgs fg;
  auto* figures = app.add_subcommand("figures", "Emit per-figure datasets from run artifacts");
  figures->add_option("--run", fg.run_dir, "Output directory of `simulate`");
  figures->add_option("--sweep", fg.sweep, "sweep.csv from `sweep`");
  figures->add_option("--lambda", fg.lambda, "Saving rate for the xi-gamma curves")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  figures->add_option("--tp-list", fg.tp_list, "Periods for the xi-gamma curves")
      ->capture_default_str();
  figures->add_option("--bins", fg.bins, "Histogram bins")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  figures->add_option("--out", fg.out, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << io::kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "kinex: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (sweep->parsed()) return cmd_sweep(sw, out);
    if (fit->parsed()) return cmd_fit(ft, out);
    if (figures->parsed()) return cmd_figures(fg, out);
  } catch (const UsageError& e) {
    err << "kinex: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "kinex: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::InvalidConfig || e.kind() == ErrorKind::ParseError ? kUsage
                                                                                    : kRuntime;
  } catch (const std::exception& e) {
    err << "kinex: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

}  // namespace kinex::cli
