// nslit command line tool: fringe curves, FWHM sweeps, resolvability
// reports, photon-counting ensembles and figure-style dataset bundles.
//
// Exit codes: 0 success, 1 computation/output error, 2 usage error.
// Every successful run writes a manifest next to its output with enough
// parameters (including the seed) to reproduce the files byte for byte.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nslit/nslit.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kSchemaVersion = "1.0.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Relative outputs may be redirected with the NSLIT_OUT_DIR environment
// variable; absolute paths are taken as-is.
fs::path resolve_out(const std::string& raw) {
  fs::path path(raw);
  if (path.is_absolute()) return path;
  if (const char* dir = std::getenv("NSLIT_OUT_DIR"); dir != nullptr && *dir != '\0')
    return fs::path(dir) / path;
  return path;
}

struct GridFlags {
  double start = -nslit::kPi / 2.0;
  double end = nslit::kPi / 2.0;
  int points = 100001;

  nslit::PhaseGrid grid() const {
    if (!(start < end)) throw UsageError("grid start must lie below grid end");
    return {start, end, points};
  }
};

void add_grid_flags(CLI::App* cmd, GridFlags& flags, int default_points) {
  flags.points = default_points;
  cmd->add_option("--grid-start", flags.start, "phase axis start (rad)")
      ->capture_default_str();
  cmd->add_option("--grid-end", flags.end, "phase axis end (rad)")->capture_default_str();
  cmd->add_option("--grid-points", flags.points, "number of phase samples")
      ->check(CLI::Range(2, 10'000'000))
      ->capture_default_str();
}

json grid_json(const nslit::PhaseGrid& grid) {
  return json{{"start", grid.start}, {"end", grid.end}, {"points", grid.n_points}};
}

json base_manifest(const std::string& command) {
  return json{{"tool", "nslit"},
              {"tool_version", nslit::kVersion},
              {"spec_version", kSchemaVersion},
              {"command", command}};
}

void write_manifest(const fs::path& data_path, json manifest) {
  fs::path path = data_path;
  path += ".manifest.json";
  manifest["output"] = data_path.filename().string();
  nslit::write_file_atomic(path, manifest.dump(2) + "\n");
}

// Column-oriented table; the first column is usually the phase axis.
struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns;

  std::string csv() const {
    std::ostringstream out;
    for (std::size_t c = 0; c < headers.size(); ++c)
      out << (c == 0 ? "" : ",") << headers[c];
    out << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < columns.size(); ++c)
        out << (c == 0 ? "" : ",") << nslit::format_g9(columns[c][r]);
      out << '\n';
    }
    return out.str();
  }

  std::string json_rows() const {
    json rows = json::array();
    const std::size_t n = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < n; ++r) {
      json row;
      for (std::size_t c = 0; c < columns.size(); ++c) row[headers[c]] = columns[c][r];
      rows.push_back(std::move(row));
    }
    return rows.dump(2) + "\n";
  }
};

void write_table(const fs::path& path, const Table& table, const std::string& format) {
  nslit::write_file_atomic(path, format == "json" ? table.json_rows() : table.csv());
}

std::vector<double> grid_phases(const nslit::PhaseGrid& grid) {
  std::vector<double> phases(static_cast<std::size_t>(grid.n_points));
  for (int i = 0; i < grid.n_points; ++i) phases[static_cast<std::size_t>(i)] = grid.point(i);
  return phases;
}

// ---------------------------------------------------------------------------
// fringe

struct FringeArgs {
  int n = 0;
  double r = 0.0;
  std::int64_t k = 1;
  GridFlags grid;
  std::string out = "fringe.csv";
  std::string format = "csv";
};

void run_fringe(const FringeArgs& args) {
  const nslit::PhaseGrid grid = args.grid.grid();
  const nslit::FringeParams params{args.n, args.r};
  const nslit::FringeCurve curve =
      nslit::kth_power(nslit::sample_curve(params, grid, true), {args.k});

  Table table{{"phase", "intensity"}, {grid_phases(grid), curve.values}};
  const fs::path path = resolve_out(args.out);
  write_table(path, table, args.format);

  json manifest = base_manifest("fringe");
  manifest["parameters"] = {{"n", args.n}, {"r", args.r}, {"k", args.k},
                            {"grid", grid_json(grid)}, {"format", args.format}};
  write_manifest(path, manifest);
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string n_list;
  std::string k_list;
  double r = 0.0;
  std::string out = "sweep.csv";
  std::string format = "csv";
};

void run_sweep(const SweepArgs& args) {
  std::vector<std::int64_t> n_values;
  std::vector<std::int64_t> k_values;
  try {
    n_values = nslit::parse_range_list(args.n_list);
    k_values = nslit::parse_range_list(args.k_list);
  } catch (const nslit::DomainError& e) {
    throw UsageError(e.what());
  }
  std::vector<int> n_ints;
  n_ints.reserve(n_values.size());
  for (std::int64_t n : n_values) {
    if (n < 1 || n > 1'000'000) throw UsageError("sweep: N values must lie in [1, 1e6]");
    n_ints.push_back(static_cast<int>(n));
  }
  for (std::int64_t k : k_values)
    if (k < 1 || k > nslit::kMaxOrder) throw UsageError("sweep: K values must lie in [1, 1e6]");

  const std::vector<nslit::SweepRow> rows = nslit::sweep_fwhm(n_ints, k_values, args.r);

  Table table{{"n", "k", "fwhm_rad", "fwhm_over_snl"}, {{}, {}, {}, {}}};
  double width_at_k1 = 0.0;
  int width_n = 0;
  for (const auto& row : rows) {
    if (row.n_slits != width_n) {
      width_n = row.n_slits;
      width_at_k1 = nslit::fwhm_exact({row.n_slits, args.r}, {1}).fwhm;
    }
    table.columns[0].push_back(static_cast<double>(row.n_slits));
    table.columns[1].push_back(static_cast<double>(row.order));
    table.columns[2].push_back(row.fwhm);
    table.columns[3].push_back(row.fwhm / nslit::snl_reference(width_at_k1, row.order));
  }

  const fs::path path = resolve_out(args.out);
  write_table(path, table, args.format);

  json manifest = base_manifest("sweep");
  manifest["parameters"] = {{"n", args.n_list}, {"k", args.k_list}, {"r", args.r},
                            {"format", args.format}};
  write_manifest(path, manifest);
}

// ---------------------------------------------------------------------------
// resolve

struct ResolveArgs {
  int n = 0;
  double r = 0.0;
  std::int64_t k = 1;
  double f0_hz = 1.0;
  double f1_ratio = 0.0;
  double f1_hz = 0.0;
  double delta_t = 0.0;  // 0 = default 1/f0
  bool have_ratio = false;
  bool have_f1_hz = false;
  std::string out = "resolve.json";
};

void run_resolve(const ResolveArgs& args) {
  if (args.have_ratio == args.have_f1_hz)
    throw UsageError("resolve: give exactly one of --f1-ratio or --f1-hz");
  const double f1 = args.have_f1_hz ? args.f1_hz : args.f1_ratio * args.f0_hz;
  const double delta_t = args.delta_t > 0.0 ? args.delta_t : 1.0 / args.f0_hz;
  if (!(f1 > 0.0)) throw UsageError("resolve: f1 must be > 0");

  const nslit::SpectralPair pair{args.f0_hz, f1, delta_t};
  const nslit::ResolvabilityReport report =
      nslit::resolvable(pair, {args.n, args.r}, {args.k});

  json body = {{"n", args.n},
               {"k", args.k},
               {"r", args.r},
               {"f0_hz", pair.f0_hz},
               {"f1_hz", pair.f1_hz},
               {"delta_t_s", pair.delta_t_s},
               {"delta_alpha_rad", report.peak_separation},
               {"fwhm_rad", report.fwhm},
               {"margin", report.margin},
               {"resolvable", report.resolvable},
               {"min_resolvable_df_hz", report.min_resolvable_df},
               {"spec_version", kSchemaVersion},
               {"tool_version", nslit::kVersion}};

  const fs::path path = resolve_out(args.out);
  nslit::write_file_atomic(path, body.dump(2) + "\n");
  std::cout << body.dump(2) << '\n';

  json manifest = base_manifest("resolve");
  manifest["parameters"] = {{"n", args.n}, {"r", args.r}, {"k", args.k},
                            {"f0_hz", args.f0_hz}, {"f1_hz", pair.f1_hz},
                            {"delta_t_s", pair.delta_t_s}};
  write_manifest(path, manifest);
}

// ---------------------------------------------------------------------------
// noise

struct NoiseArgs {
  int n = 0;
  double r = 0.0;
  std::int64_t k = 1;
  double mean = 1e4;
  int trials = 200;
  std::uint64_t seed = 12345;
  GridFlags grid;
  std::string out = "noise.csv";
  std::string format = "csv";
};

void run_noise(const NoiseArgs& args) {
  if (!(args.mean > 0.0)) throw UsageError("noise: --mean must be > 0");
  const nslit::PhaseGrid grid = args.grid.grid();
  const nslit::NoiseConfig cfg{args.mean, args.trials, args.seed,
                               static_cast<int>(args.k)};
  const nslit::EnsembleResult result = nslit::ensemble_fringe({args.n, args.r}, grid, cfg);

  Table table{{"phase", "mean", "stderr"},
              {grid_phases(grid), result.mean_curve, result.stderr_curve}};
  const fs::path path = resolve_out(args.out);
  write_table(path, table, args.format);

  json manifest = base_manifest("noise");
  manifest["parameters"] = {{"n", args.n}, {"r", args.r}, {"k", args.k},
                            {"mean_photons", args.mean}, {"trials", args.trials},
                            {"grid", grid_json(grid)}, {"format", args.format}};
  manifest["seed"] = args.seed;
  write_manifest(path, manifest);
}

// ---------------------------------------------------------------------------
// repro

struct ReproArgs {
  std::string figure;
  std::string outdir;
  int grid_points = 100001;
};

std::string column_name(double f_ratio, std::int64_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "f%.2f_k%lld", f_ratio, static_cast<long long>(k));
  return buf;
}

// One fringe line of frequency ratio*f0 seen through delay 1/f0, raised to
// the Kth power and centered at its folded peak phase.
std::vector<double> line_curve(const nslit::FringeParams& params, double f_ratio,
                               std::int64_t k, const nslit::PhaseGrid& grid) {
  const double center = nslit::centered_peak_phase(f_ratio, 1.0);
  std::vector<double> values(static_cast<std::size_t>(grid.n_points));
  for (int i = 0; i < grid.n_points; ++i)
    values[static_cast<std::size_t>(i)] = nslit::kth_power_value(
        nslit::normalized_intensity_at(params, grid.point(i) - center), k);
  return values;
}

Table kladder_panel(int n_slits, double r, const std::vector<std::int64_t>& orders,
                    const nslit::PhaseGrid& grid) {
  Table table;
  table.headers.push_back("phase");
  table.columns.push_back(grid_phases(grid));
  const nslit::FringeCurve base = nslit::sample_curve({n_slits, r}, grid, true);
  for (std::int64_t k : orders) {
    table.headers.push_back("k" + std::to_string(k));
    table.columns.push_back(nslit::kth_power(base, {k}).values);
  }
  return table;
}

Table line_panel(int n_slits, double r, const std::vector<double>& f_ratios,
                 const std::vector<std::int64_t>& orders, const nslit::PhaseGrid& grid,
                 bool with_composite) {
  Table table;
  table.headers.push_back("phase");
  table.columns.push_back(grid_phases(grid));
  const nslit::FringeParams params{n_slits, r};
  for (std::int64_t k : orders)
    for (double f : f_ratios) {
      table.headers.push_back(column_name(f, k));
      table.columns.push_back(line_curve(params, f, k, grid));
    }
  if (with_composite && f_ratios.size() == 2 && orders.size() == 1) {
    table.headers.push_back("composite");
    const nslit::FringeCurve sum = nslit::composite_curve(
        {f_ratios[1], f_ratios[0], 1.0}, params, {orders[0]}, grid);
    table.columns.push_back(sum.values);
  }
  return table;
}

Table fwhm_table(const std::vector<int>& n_values, const std::vector<std::int64_t>& k_values,
                 double r) {
  const std::vector<nslit::SweepRow> rows = nslit::sweep_fwhm(n_values, k_values, r);
  Table table{{"n", "k", "fwhm_rad", "fwhm_over_snl"}, {{}, {}, {}, {}}};
  double width_at_k1 = 0.0;
  int width_n = 0;
  for (const auto& row : rows) {
    if (row.n_slits != width_n) {
      width_n = row.n_slits;
      width_at_k1 = nslit::fwhm_exact({row.n_slits, r}, {1}).fwhm;
    }
    table.columns[0].push_back(static_cast<double>(row.n_slits));
    table.columns[1].push_back(static_cast<double>(row.order));
    table.columns[2].push_back(row.fwhm);
    table.columns[3].push_back(row.fwhm / nslit::snl_reference(width_at_k1, row.order));
  }
  return table;
}

void run_repro(const ReproArgs& args) {
  const std::vector<std::string> known = {"fig3a", "fig3b", "fig3c", "fig3d", "fig4", "fig5"};
  if (std::find(known.begin(), known.end(), args.figure) == known.end())
    throw UsageError("repro: unknown figure id '" + args.figure + "'");

  const fs::path dir =
      resolve_out(args.outdir.empty() ? "repro-" + args.figure : args.outdir);
  const nslit::PhaseGrid grid{-nslit::kPi / 2.0, nslit::kPi / 2.0, args.grid_points};
  if (!(grid.start < grid.end) || grid.n_points < 2) throw UsageError("repro: bad grid");

  const std::vector<std::int64_t> ladder = {1, 2, 5, 10, 20, 50, 100};
  std::vector<int> all_n;
  for (int n = 2; n <= 200; n += 2) all_n.push_back(n);
  std::vector<std::int64_t> all_k;
  for (std::int64_t k = 1; k <= 100; ++k) all_k.push_back(k);

  json manifest = base_manifest("repro");
  manifest["figure"] = args.figure;
  json panels = json::object();
  auto emit = [&](const std::string& name, const Table& table, json params) {
    nslit::write_file_atomic(dir / (name + ".csv"), table.csv());
    panels[name] = std::move(params);
  };

  if (args.figure == "fig3a") {
    emit("fig3a", kladder_panel(2, 0.0, ladder, grid),
         {{"n", 2}, {"r", 0.0}, {"k", ladder}, {"grid", grid_json(grid)}});
  } else if (args.figure == "fig3b") {
    emit("fig3b", kladder_panel(10, 0.0, ladder, grid),
         {{"n", 10}, {"r", 0.0}, {"k", ladder}, {"grid", grid_json(grid)}});
    emit("fig3b_inset", kladder_panel(100, 0.0, ladder, grid),
         {{"n", 100}, {"r", 0.0}, {"k", ladder}, {"grid", grid_json(grid)}});
  } else if (args.figure == "fig3c") {
    emit("fig3c", fwhm_table(all_n, all_k, 0.0),
         {{"n", "2..200:2"}, {"k", "1..100"}, {"r", 0.0}});
  } else if (args.figure == "fig3d") {
    emit("fig3d", fwhm_table(all_n, {100}, 0.0),
         {{"n", "2..200:2"}, {"k", 100}, {"r", 0.0}});
  } else if (args.figure == "fig4") {
    emit("fig4a", line_panel(2, 0.0, {0.8, 1.0, 1.2}, {1}, grid, false),
         {{"n", 2}, {"r", 0.0}, {"k", 1}, {"f_ratios", {0.8, 1.0, 1.2}}});
    emit("fig4b", line_panel(2, 0.0, {1.0, 0.8}, {1}, grid, true),
         {{"n", 2}, {"r", 0.0}, {"k", 1}, {"f_ratios", {1.0, 0.8}}});
    emit("fig4c", line_panel(2, 0.0, {1.0, 0.8}, {10}, grid, true),
         {{"n", 2}, {"r", 0.0}, {"k", 10}, {"f_ratios", {1.0, 0.8}}});
    emit("fig4d", line_panel(2, 0.0, {1.0, 0.8}, {100}, grid, true),
         {{"n", 2}, {"r", 0.0}, {"k", 100}, {"f_ratios", {1.0, 0.8}}});
    manifest["notes"] = {"delay convention: delta_t = 1/f0"};
  } else {  // fig5
    emit("fig5a", line_panel(10, 6.0, {0.90, 1.00}, {1}, grid, false),
         {{"n", 10}, {"r", 6.0}, {"k", 1}, {"f_ratios", {0.90, 1.00}}});
    emit("fig5b", line_panel(100, 6.0, {0.90, 1.00}, {1}, grid, false),
         {{"n", 100}, {"r", 6.0}, {"k", 1}, {"f_ratios", {0.90, 1.00}}});
    emit("fig5c", line_panel(100, 6.0, {0.80, 0.90, 1.00}, {1, 10, 100}, grid, false),
         {{"n", 100}, {"r", 6.0}, {"k", {1, 10, 100}}, {"f_ratios", {0.80, 0.90, 1.00}}});
    emit("fig5d", line_panel(100, 6.0, {0.99, 1.00}, {10, 100}, grid, false),
         {{"n", 100}, {"r", 6.0}, {"k", {10, 100}}, {"f_ratios", {0.99, 1.00}}});
    manifest["notes"] = {
        "delay convention: delta_t = 1/f0 (the source figures do not state the delay; "
        "the dataset pins it so the files are reproducible)"};
  }

  manifest["panels"] = std::move(panels);
  manifest["grid"] = grid_json(grid);
  nslit::write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"N-slit interference fringes, Kth-power line narrowing, frequency "
               "resolvability and photon-counting Monte Carlo"};
  app.set_version_flag("--version", nslit::kVersion);
  app.require_subcommand(1);

  FringeArgs fringe_args;
  auto* fringe = app.add_subcommand("fringe", "Sample a normalized Kth-power fringe curve");
  fringe->add_option("--n", fringe_args.n, "slit count N")
      ->required()
      ->check(CLI::Range(1, 1'000'000));
  fringe->add_option("--r", fringe_args.r, "envelope ratio beta/alpha")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fringe->add_option("--k", fringe_args.k, "intensity-product order K")
      ->check(CLI::Range(std::int64_t{1}, nslit::kMaxOrder))
      ->capture_default_str();
  add_grid_flags(fringe, fringe_args.grid, 100001);
  fringe->add_option("--out", fringe_args.out, "output file")->capture_default_str();
  fringe->add_option("--format", fringe_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "FWHM table over N and K lists");
  sweep->add_option("--n", sweep_args.n_list, "N list, e.g. 2,10,100 or 2..200:2")
      ->required();
  sweep->add_option("--k", sweep_args.k_list, "K list, e.g. 1..100")->required();
  sweep->add_option("--r", sweep_args.r, "envelope ratio beta/alpha")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sweep->add_option("--out", sweep_args.out, "output file")->capture_default_str();
  sweep->add_option("--format", sweep_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  ResolveArgs resolve_args;
  auto* resolve = app.add_subcommand("resolve", "Two-frequency resolvability report");
  resolve->add_option("--n", resolve_args.n, "slit count N")
      ->required()
      ->check(CLI::Range(1, 1'000'000));
  resolve->add_option("--r", resolve_args.r, "envelope ratio beta/alpha")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  resolve->add_option("--k", resolve_args.k, "intensity-product order K")
      ->check(CLI::Range(std::int64_t{1}, nslit::kMaxOrder))
      ->capture_default_str();
  resolve->add_option("--f0-hz", resolve_args.f0_hz, "reference frequency f0 (Hz)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* ratio_opt =
      resolve->add_option("--f1-ratio", resolve_args.f1_ratio, "second frequency as f1/f0")
          ->check(CLI::PositiveNumber);
  auto* f1_opt = resolve->add_option("--f1-hz", resolve_args.f1_hz, "second frequency (Hz)")
                     ->check(CLI::PositiveNumber);
  resolve->add_option("--delta-t", resolve_args.delta_t,
                      "interferometer delay (s); default 1/f0")
      ->check(CLI::PositiveNumber);
  resolve->add_option("--out", resolve_args.out, "output file")->capture_default_str();

  NoiseArgs noise_args;
  auto* noise = app.add_subcommand("noise", "Poisson photon-counting ensemble fringe");
  noise->add_option("--n", noise_args.n, "slit count N")
      ->required()
      ->check(CLI::Range(1, 1'000'000));
  noise->add_option("--r", noise_args.r, "envelope ratio beta/alpha")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  noise->add_option("--k", noise_args.k, "detector split order K")
      ->check(CLI::Range(std::int64_t{1}, nslit::kMaxOrder))
      ->capture_default_str();
  noise->add_option("--mean", noise_args.mean, "mean photons per undivided sample")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  noise->add_option("--trials", noise_args.trials, "Monte Carlo trials per phase point")
      ->check(CLI::Range(1, 100'000'000))
      ->capture_default_str();
  noise->add_option("--seed", noise_args.seed, "random seed")->capture_default_str();
  add_grid_flags(noise, noise_args.grid, 1001);
  noise->add_option("--out", noise_args.out, "output file")->capture_default_str();
  noise->add_option("--format", noise_args.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  ReproArgs repro_args;
  auto* repro = app.add_subcommand("repro", "Write a figure-style dataset bundle");
  repro->add_option("figure", repro_args.figure,
                    "one of fig3a, fig3b, fig3c, fig3d, fig4, fig5")
      ->required();
  repro->add_option("--outdir", repro_args.outdir, "output directory (default repro-<figure>)");
  repro->add_option("--grid-points", repro_args.grid_points, "phase samples per curve")
      ->check(CLI::Range(2, 10'000'000))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    resolve_args.have_ratio = ratio_opt->count() > 0;
    resolve_args.have_f1_hz = f1_opt->count() > 0;
    if (app.got_subcommand(fringe)) run_fringe(fringe_args);
    else if (app.got_subcommand(sweep)) run_sweep(sweep_args);
    else if (app.got_subcommand(resolve)) run_resolve(resolve_args);
    else if (app.got_subcommand(noise)) run_noise(noise_args);
    else if (app.got_subcommand(repro)) run_repro(repro_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
