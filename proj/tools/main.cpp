#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "percept/cluster.hpp"
#include "percept/config.hpp"
#include "percept/dataset.hpp"
#include "percept/errors.hpp"
#include "percept/explore.hpp"
#include "percept/geometry.hpp"
#include "percept/neighbors.hpp"
#include "percept/rng.hpp"
#include "percept/stats.hpp"
#include "percept/transform.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace percept;

namespace {

/// Caller mistakes that CLI11 cannot catch itself; mapped to exit code 2.
struct usage_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw io_error("cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw io_error("write failure on " + tmp.string());
  }
  fs::rename(tmp, path);
}

/// Flags shared by every subcommand plus the merged configuration.
struct Context {
  std::string config_path;
  std::string log_path;
  std::string out;
  std::uint64_t seed{0};
  CLI::Option* seed_opt{nullptr};
  RunConfig cfg;
  std::chrono::steady_clock::time_point started;

  void begin() {
    started = std::chrono::steady_clock::now();
    cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed_opt != nullptr && seed_opt->count() > 0) {
      cfg.seed = seed;
      cfg.seed_provided = true;
    }
  }
  void require_seed() const {
    if (!cfg.seed_provided) {
      throw usage_failure("--seed (or a config-file seed) is required for stochastic runs");
    }
  }
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  fs::path out_file(const std::string& name) const { return fs::path(out) / name; }

  void emit_manifest(const std::string& subcommand, json parameters,
                     std::vector<std::string> inputs, std::vector<std::string> outputs,
                     const fs::path& path) const {
    json j;
    j["subcommand"] = subcommand;
    j["parameters"] = std::move(parameters);
    j["inputs"] = std::move(inputs);
    j["outputs"] = std::move(outputs);
    j["config_digest"] = run_digest(cfg);
    j["duration_seconds"] = elapsed();
    write_text_atomic(path, j.dump(2) + "\n");
  }
};

Context& add_common(CLI::App& sub, std::list<Context>& store, bool needs_log) {
  Context& ctx = store.emplace_back();
  sub.add_option("--config", ctx.config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
  CLI::Option* log = sub.add_option("--log", ctx.log_path, "input log CSV");
  if (needs_log) log->required()->check(CLI::ExistingFile);
  sub.add_option("--out", ctx.out,
                 needs_log ? "output directory" : "output log path")
      ->required();
  ctx.seed_opt = sub.add_option("--seed", ctx.seed, "random seed");
  return ctx;
}

std::vector<double> parse_number_list(const std::string& text, std::size_t expect,
                                      const std::string& what) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw usage_failure(what + ": cannot parse '" + field + "'");
    }
  }
  if (values.size() != expect) {
    throw usage_failure(what + ": expected " + std::to_string(expect) + " comma-separated values");
  }
  return values;
}

int checked_count(double v, const std::string& what) {
  const int n = static_cast<int>(v);
  if (static_cast<double>(n) != v || n < 2) {
    throw usage_failure(what + " must be an integer >= 2");
  }
  return n;
}

/// Subset rows of the whole-dataset normalized readings. Analyses share one
/// column scaling so yaw slices stay mutually comparable.
Matrix normalized_rows(const Dataset& data, const Subset& subset) {
  const NormalizedSensors norm = normalize_sensors(data);
  Matrix rows;
  rows.reserve(subset.size());
  for (std::size_t row : subset.rows) rows.push_back(norm.values[row]);
  return rows;
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::uint64_t n_actions{0};
  CLI::Option* n_actions_opt{nullptr};
  std::string noise;
  std::string checkpoint_path;
  bool resume_run{false};
};

void run_simulate(Context& ctx, const SimulateArgs& args) {
  ctx.begin();
  if (args.n_actions_opt->count() > 0) ctx.cfg.n_actions = args.n_actions;
  if (!args.noise.empty()) ctx.cfg.noise = args.noise == "on";

  const Arena arena = arena_of(ctx.cfg);
  const RobotParams params = robot_params_of(ctx.cfg);
  const SensorModel model = sensor_model_of(ctx.cfg);
  const ExploreConfig explore = explore_config_of(ctx.cfg);

  CheckpointSink checkpoint_sink;
  if (!args.checkpoint_path.empty()) {
    checkpoint_sink = [&](const Checkpoint& c) { write_checkpoint(c, args.checkpoint_path); };
  }

  RunSummary summary{};
  std::vector<std::string> inputs;
  if (args.resume_run) {
    if (args.checkpoint_path.empty()) {
      throw usage_failure("--resume requires --checkpoint");
    }
    const Checkpoint checkpoint = read_checkpoint(args.checkpoint_path);
    const Dataset existing = read_log(ctx.out);
    CsvLogWriter writer(ctx.out, CsvLogWriter::Mode::append);
    summary = resume(checkpoint, explore, arena, params, model, existing, writer,
                     checkpoint_sink);
    inputs = {args.checkpoint_path, ctx.out};
  } else {
    if (ctx.cfg.n_actions > 0) ctx.require_seed();
    CsvLogWriter writer(ctx.out, CsvLogWriter::Mode::fresh);
    summary = run_exploration(explore, arena, params, model, writer, checkpoint_sink);
  }

  json params_json{{"n_actions", ctx.cfg.n_actions},
                   {"noise", ctx.cfg.noise},
                   {"seed", ctx.cfg.seed},
                   {"resume", args.resume_run},
                   {"actions_completed", summary.actions_completed},
                   {"stuck_count", summary.stuck_count}};
  std::vector<std::string> outputs{ctx.out};
  if (!args.checkpoint_path.empty()) outputs.push_back(args.checkpoint_path);
  ctx.emit_manifest("simulate", std::move(params_json), std::move(inputs), outputs,
                    ctx.out + ".manifest.json");
}

// ---- analyses ------------------------------------------------------------

void run_path_density(Context& ctx, const CLI::Option* res_opt, int resolution) {
  ctx.begin();
  if (res_opt->count() > 0) ctx.cfg.resolution = resolution;
  const Dataset data = read_log(ctx.log_path);
  const GridSpec grid{ctx.cfg.resolution, ctx.cfg.side};
  const OccupancyGrid occ = occupancy_grid(data, grid);

  std::ostringstream csv;
  csv << "row,col,count\n";
  for (int row = 0; row < grid.resolution; ++row) {
    for (int col = 0; col < grid.resolution; ++col) {
      csv << row << ',' << col << ',' << occ.at(row, col) << '\n';
    }
  }
  const fs::path out = ctx.out_file("density.csv");
  write_text_atomic(out, csv.str());
  ctx.emit_manifest("path-density", {{"resolution", grid.resolution}}, {ctx.log_path},
                    {out.string()}, ctx.out_file("manifest.json"));
}

void run_knn(Context& ctx, std::size_t k, std::size_t anchors) {
  ctx.begin();
  ctx.require_seed();
  const Dataset data = read_log(ctx.log_path);
  Rng rng(ctx.cfg.seed);
  const LocalityReport report = locality_ratio(data, k, anchors, rng);

  json summary{{"k", report.k},
               {"n_anchors", report.anchors.size()},
               {"mean_neighbor_distance", report.mean_neighbor_distance},
               {"baseline_distance", report.baseline_distance},
               {"ratio", report.ratio}};
  std::ostringstream csv;
  csv << "anchor_x,anchor_y,neighbor_x,neighbor_y\n";
  for (std::size_t a = 0; a < report.anchors.size(); ++a) {
    const LogRecord& anchor = data[report.anchors[a]];
    for (std::size_t id : report.neighbors[a]) {
      csv << format_g9(anchor.x1) << ',' << format_g9(anchor.y1) << ','
          << format_g9(data[id].x1) << ',' << format_g9(data[id].y1) << '\n';
    }
  }
  const fs::path json_out = ctx.out_file("locality.json");
  const fs::path csv_out = ctx.out_file("pairs.csv");
  write_text_atomic(json_out, summary.dump(2) + "\n");
  write_text_atomic(csv_out, csv.str());
  ctx.emit_manifest("knn", {{"k", k}, {"anchors", anchors}, {"seed", ctx.cfg.seed}},
                    {ctx.log_path}, {json_out.string(), csv_out.string()},
                    ctx.out_file("manifest.json"));
}

struct StdArgs {
  int sensor{12};
  int resolution{50};
  CLI::Option* res_opt{nullptr};
  bool rolling{false};
  std::size_t window{10};
};

void run_std(Context& ctx, const StdArgs& args) {
  ctx.begin();
  if (args.res_opt->count() > 0) ctx.cfg.resolution = args.resolution;
  const Dataset data = read_log(ctx.log_path);
  const GridSpec grid{ctx.cfg.resolution, ctx.cfg.side};
  const StdGrid map = args.rolling
                          ? rolling_grid_std(data, args.sensor, grid, args.window)
                          : grid_std(data, args.sensor, grid);

  std::ostringstream csv;
  csv << "row,col,value,count\n";
  for (int row = 0; row < grid.resolution; ++row) {
    for (int col = 0; col < grid.resolution; ++col) {
      if (!map.has_value(row, col)) continue;
      csv << row << ',' << col << ',' << format_g9(map.at(row, col)) << ','
          << map.counts[map.cell_index(row, col)] << '\n';
    }
  }
  const fs::path out = ctx.out_file("std_grid.csv");
  write_text_atomic(out, csv.str());
  json params{{"sensor", args.sensor},
              {"resolution", grid.resolution},
              {"rolling", args.rolling}};
  if (args.rolling) params["window"] = args.window;
  ctx.emit_manifest("std", std::move(params), {ctx.log_path}, {out.string()},
                    ctx.out_file("manifest.json"));
}

void run_corr(Context& ctx, const CLI::Option* yaw_opt, double yaw, double yaw_tol) {
  ctx.begin();
  const Dataset data = read_log(ctx.log_path);
  const bool filtered = yaw_opt->count() > 0;
  const CorrelationMatrix m =
      filtered ? sensor_correlation(data, yaw, yaw_tol) : sensor_correlation(data);

  std::ostringstream csv;
  for (int i = 0; i < kSensorCount; ++i) {
    for (int j = 0; j < kSensorCount; ++j) {
      if (j > 0) csv << ',';
      csv << format_g9(m.at(i, j));
    }
    csv << '\n';
  }
  const fs::path out = ctx.out_file("correlation.csv");
  write_text_atomic(out, csv.str());
  json params{{"yaw_filtered", filtered}};
  if (filtered) {
    params["yaw"] = yaw;
    params["yaw_tol"] = yaw_tol;
  }
  ctx.emit_manifest("corr", std::move(params), {ctx.log_path}, {out.string()},
                    ctx.out_file("manifest.json"));
}

struct HullArgs {
  double region_x{0.0};
  double region_y{0.0};
  double radius{1.0};
  double yaw{0.0};
  double yaw_tol{0.1};
};

void run_hull(Context& ctx, const HullArgs& args) {
  ctx.begin();
  const Dataset data = read_log(ctx.log_path);
  const Subset subset = filter_by_yaw(data, args.yaw, args.yaw_tol);
  if (subset.size() < 3) throw insufficient_data("fewer than 3 records after yaw filter");
  const PcaBasis basis = fit_pca(normalized_rows(data, subset));
  const HullCorrespondence hc = hull_correspondence(
      data, {args.region_x, args.region_y}, args.radius, args.yaw, args.yaw_tol, basis);

  std::ostringstream physical;
  physical << "x,y\n";
  for (const Vec2& v : hc.physical.vertices) {
    physical << format_g9(v.x) << ',' << format_g9(v.y) << '\n';
  }
  std::ostringstream sensor;
  sensor << "u,v\n";
  for (const Vec2& v : hc.sensor_image) {
    sensor << format_g9(v.x) << ',' << format_g9(v.y) << '\n';
  }
  json verdict{{"winding_preserved", hc.winding_preserved},
               {"area", hc.physical.area},
               {"perimeter", hc.physical.perimeter},
               {"vertex_count", hc.physical.vertices.size()}};

  const fs::path phys_out = ctx.out_file("hull_physical.csv");
  const fs::path sens_out = ctx.out_file("hull_sensor.csv");
  const fs::path verdict_out = ctx.out_file("verdict.json");
  write_text_atomic(phys_out, physical.str());
  write_text_atomic(sens_out, sensor.str());
  write_text_atomic(verdict_out, verdict.dump(2) + "\n");
  ctx.emit_manifest("hull",
                    {{"region_x", args.region_x},
                     {"region_y", args.region_y},
                     {"radius", args.radius},
                     {"yaw", args.yaw},
                     {"yaw_tol", args.yaw_tol}},
                    {ctx.log_path},
                    {phys_out.string(), sens_out.string(), verdict_out.string()},
                    ctx.out_file("manifest.json"));
}

struct ClusterArgs {
  std::size_t k{4};
  double yaw{0.0};
  double yaw_tol{0.1};
  std::size_t restarts{10};
};

void run_cluster(Context& ctx, const ClusterArgs& args) {
  ctx.begin();
  ctx.require_seed();
  const Dataset data = read_log(ctx.log_path);
  const Subset subset = filter_by_yaw(data, args.yaw, args.yaw_tol);
  if (subset.size() == 0) throw insufficient_data("no records after yaw filter");
  const ClusterModel model =
      kmeans(normalized_rows(data, subset), args.k, ctx.cfg.seed, args.restarts);
  const double purity = wall_purity(model, subset, arena_of(ctx.cfg));

  std::ostringstream csv;
  csv << "index,x1,y1,cluster\n";
  for (std::size_t i = 0; i < subset.size(); ++i) {
    csv << subset[i].index << ',' << format_g9(subset[i].x1) << ','
        << format_g9(subset[i].y1) << ',' << model.assignments[i] << '\n';
  }
  std::vector<std::size_t> sizes(args.k, 0);
  for (std::size_t a : model.assignments) ++sizes[a];
  json summary{{"k", args.k},
               {"inertia", model.inertia},
               {"purity", purity},
               {"sizes", sizes},
               {"records", subset.size()}};

  const fs::path csv_out = ctx.out_file("assignments.csv");
  const fs::path json_out = ctx.out_file("summary.json");
  write_text_atomic(csv_out, csv.str());
  write_text_atomic(json_out, summary.dump(2) + "\n");
  ctx.emit_manifest("cluster",
                    {{"k", args.k},
                     {"yaw", args.yaw},
                     {"yaw_tol", args.yaw_tol},
                     {"restarts", args.restarts},
                     {"seed", ctx.cfg.seed}},
                    {ctx.log_path}, {csv_out.string(), json_out.string()},
                    ctx.out_file("manifest.json"));
}

struct ElbowArgs {
  std::size_t k_max{10};
  double yaw{0.0};
  double yaw_tol{0.1};
  std::size_t restarts{10};
};

void run_elbow(Context& ctx, const ElbowArgs& args) {
  ctx.begin();
  ctx.require_seed();
  if (args.k_max < 1) throw usage_failure("--k-max must be >= 1");
  const Dataset data = read_log(ctx.log_path);
  const Subset subset = filter_by_yaw(data, args.yaw, args.yaw_tol);
  if (subset.size() == 0) throw insufficient_data("no records after yaw filter");
  std::vector<std::size_t> range;
  for (std::size_t k = 1; k <= args.k_max; ++k) range.push_back(k);
  const ElbowCurve curve =
      elbow_select(normalized_rows(data, subset), range, ctx.cfg.seed, args.restarts);

  std::ostringstream csv;
  csv << "k,inertia\n";
  for (std::size_t i = 0; i < curve.ks.size(); ++i) {
    csv << curve.ks[i] << ',' << format_g9(curve.inertia[i]) << '\n';
  }
  json selected{{"selected_k", curve.selected_k}};

  const fs::path csv_out = ctx.out_file("elbow.csv");
  const fs::path json_out = ctx.out_file("selected.json");
  write_text_atomic(csv_out, csv.str());
  write_text_atomic(json_out, selected.dump(2) + "\n");
  ctx.emit_manifest("elbow",
                    {{"k_max", args.k_max},
                     {"yaw", args.yaw},
                     {"yaw_tol", args.yaw_tol},
                     {"restarts", args.restarts},
                     {"seed", ctx.cfg.seed}},
                    {ctx.log_path}, {csv_out.string(), json_out.string()},
                    ctx.out_file("manifest.json"));
}

struct TransformArgs {
  std::string line;
  std::string grid;
  double yaw{0.0};
  double yaw_tol{0.1};
  std::size_t k{10};
};

void run_transform(Context& ctx, const TransformArgs& args) {
  ctx.begin();
  if (args.line.empty() == args.grid.empty()) {
    throw usage_failure("exactly one of --line or --grid is required");
  }
  const Dataset data = read_log(ctx.log_path);
  const Arena arena = arena_of(ctx.cfg);

  ProbeSet probe;
  json probe_json;
  if (!args.line.empty()) {
    const std::vector<double> v = parse_number_list(args.line, 5, "--line");
    probe = generate_line(arena, {v[0], v[1]}, {v[2], v[3]}, checked_count(v[4], "--line n"));
    probe_json = {{"kind", "line"}, {"n", probe.points.size()}};
  } else {
    const std::vector<double> v = parse_number_list(args.grid, 6, "--grid");
    probe = generate_grid(arena, {v[0], v[1]}, {v[2], v[3]},
                          checked_count(v[4], "--grid nx"), checked_count(v[5], "--grid ny"));
    probe_json = {{"kind", "grid"}, {"nx", probe.nx}, {"ny", probe.ny}};
  }

  const MappedProbe mapped = map_to_sensor_space(probe, data, args.yaw, args.yaw_tol, args.k);
  const DistortionMetrics metrics = distortion_metrics(mapped);

  std::ostringstream csv;
  csv << "px,py,plane_u,plane_v,coverage\n";
  for (std::size_t i = 0; i < probe.points.size(); ++i) {
    csv << format_g9(probe.points[i].x) << ',' << format_g9(probe.points[i].y) << ','
        << format_g9(mapped.plane[i].x) << ',' << format_g9(mapped.plane[i].y) << ','
        << mapped.coverage[i] << '\n';
  }
  json metrics_json{{"straightness", metrics.straightness},
                    {"grid_nonuniformity", metrics.grid_nonuniformity}};

  const fs::path csv_out = ctx.out_file("mapped.csv");
  const fs::path json_out = ctx.out_file("metrics.json");
  write_text_atomic(csv_out, csv.str());
  write_text_atomic(json_out, metrics_json.dump(2) + "\n");
  probe_json["yaw"] = args.yaw;
  probe_json["yaw_tol"] = args.yaw_tol;
  probe_json["k"] = args.k;
  ctx.emit_manifest("transform", std::move(probe_json), {ctx.log_path},
                    {csv_out.string(), json_out.string()}, ctx.out_file("manifest.json"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential-drive arena simulator and perceptual-space analyses"};
  app.require_subcommand(1);
  std::list<Context> contexts;

  CLI::App* simulate = app.add_subcommand("simulate", "run the exploration walk");
  Context& sim_ctx = add_common(*simulate, contexts, false);
  auto sim_args = std::make_shared<SimulateArgs>();
  sim_args->n_actions_opt =
      simulate->add_option("--n-actions", sim_args->n_actions, "actions to log");
  simulate->add_option("--noise", sim_args->noise, "sensor noise")
      ->check(CLI::IsMember({"on", "off"}));
  simulate->add_option("--checkpoint", sim_args->checkpoint_path, "checkpoint JSON path");
  simulate->add_flag("--resume", sim_args->resume_run, "continue from --checkpoint");
  simulate->callback([&sim_ctx, sim_args] { run_simulate(sim_ctx, *sim_args); });

  CLI::App* density = app.add_subcommand("path-density", "visit counts per grid cell");
  Context& den_ctx = add_common(*density, contexts, true);
  auto den_res = std::make_shared<int>(50);
  CLI::Option* den_opt = density->add_option("--resolution", *den_res, "cells per side");
  density->callback([&den_ctx, den_res, den_opt] { run_path_density(den_ctx, den_opt, *den_res); });

  CLI::App* knn = app.add_subcommand("knn", "sensor-space neighborhood locality");
  Context& knn_ctx = add_common(*knn, contexts, true);
  auto knn_k = std::make_shared<std::size_t>(10);
  auto knn_anchors = std::make_shared<std::size_t>(200);
  knn->add_option("--k", *knn_k, "neighbors per anchor");
  knn->add_option("--anchors", *knn_anchors, "anchor sample size");
  knn->callback([&knn_ctx, knn_k, knn_anchors] { run_knn(knn_ctx, *knn_k, *knn_anchors); });

  CLI::App* std_cmd = app.add_subcommand("std", "per-cell standard deviation map");
  Context& std_ctx = add_common(*std_cmd, contexts, true);
  auto std_args = std::make_shared<StdArgs>();
  std_cmd->add_option("--sensor", std_args->sensor, "sensor id 0..15");
  std_args->res_opt = std_cmd->add_option("--resolution", std_args->resolution, "cells per side");
  std_cmd->add_flag("--rolling", std_args->rolling, "windowed time-series mode");
  std_cmd->add_option("--window", std_args->window, "rolling window length");
  std_cmd->callback([&std_ctx, std_args] { run_std(std_ctx, *std_args); });

  CLI::App* corr = app.add_subcommand("corr", "inter-sensor correlation matrix");
  Context& corr_ctx = add_common(*corr, contexts, true);
  auto corr_yaw = std::make_shared<double>(0.0);
  auto corr_tol = std::make_shared<double>(0.1);
  CLI::Option* corr_yaw_opt = corr->add_option("--yaw", *corr_yaw, "yaw filter center (rad)");
  corr->add_option("--yaw-tol", *corr_tol, "yaw filter tolerance (rad)");
  corr->callback([&corr_ctx, corr_yaw_opt, corr_yaw, corr_tol] {
    run_corr(corr_ctx, corr_yaw_opt, *corr_yaw, *corr_tol);
  });

  CLI::App* hull = app.add_subcommand("hull", "physical-region hull and its sensor image");
  Context& hull_ctx = add_common(*hull, contexts, true);
  auto hull_args = std::make_shared<HullArgs>();
  hull->add_option("--region-x", hull_args->region_x, "region center x")->required();
  hull->add_option("--region-y", hull_args->region_y, "region center y")->required();
  hull->add_option("--radius", hull_args->radius, "region radius (m)")->required();
  hull->add_option("--yaw", hull_args->yaw, "yaw filter center (rad)")->required();
  hull->add_option("--yaw-tol", hull_args->yaw_tol, "yaw filter tolerance (rad)");
  hull->callback([&hull_ctx, hull_args] { run_hull(hull_ctx, *hull_args); });

  CLI::App* cluster = app.add_subcommand("cluster", "k-means over yaw-conditioned readings");
  Context& cluster_ctx = add_common(*cluster, contexts, true);
  auto cluster_args = std::make_shared<ClusterArgs>();
  cluster->add_option("--k", cluster_args->k, "cluster count")->required();
  cluster->add_option("--yaw", cluster_args->yaw, "yaw filter center (rad)")->required();
  cluster->add_option("--yaw-tol", cluster_args->yaw_tol, "yaw filter tolerance (rad)");
  cluster->add_option("--restarts", cluster_args->restarts, "k-means restarts");
  cluster->callback([&cluster_ctx, cluster_args] { run_cluster(cluster_ctx, *cluster_args); });

  CLI::App* elbow = app.add_subcommand("elbow", "inertia curve and selected k");
  Context& elbow_ctx = add_common(*elbow, contexts, true);
  auto elbow_args = std::make_shared<ElbowArgs>();
  elbow->add_option("--k-max", elbow_args->k_max, "evaluate k = 1..k-max");
  elbow->add_option("--yaw", elbow_args->yaw, "yaw filter center (rad)")->required();
  elbow->add_option("--yaw-tol", elbow_args->yaw_tol, "yaw filter tolerance (rad)");
  elbow->add_option("--restarts", elbow_args->restarts, "k-means restarts");
  elbow->callback([&elbow_ctx, elbow_args] { run_elbow(elbow_ctx, *elbow_args); });

  CLI::App* transform = app.add_subcommand("transform", "map physical probes into sensor space");
  Context& transform_ctx = add_common(*transform, contexts, true);
  auto transform_args = std::make_shared<TransformArgs>();
  transform->add_option("--line", transform_args->line, "x0,y0,x1,y1,n");
  transform->add_option("--grid", transform_args->grid, "x0,y0,x1,y1,nx,ny");
  transform->add_option("--yaw", transform_args->yaw, "yaw filter center (rad)")->required();
  transform->add_option("--yaw-tol", transform_args->yaw_tol, "yaw filter tolerance (rad)");
  transform->add_option("--k", transform_args->k, "neighbors per probe point");
  transform->callback([&transform_ctx, transform_args] {
    run_transform(transform_ctx, *transform_args);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const usage_failure& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
