#include "apsense/cli/commands.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numeric>
#include <optional>
#include <random>

#include <nlohmann/json.hpp>

#include "apsense/apf/pipeline.hpp"
#include "apsense/cam/cam.hpp"
#include "apsense/cli/monitor.hpp"
#include "apsense/common/csv.hpp"
#include "apsense/common/error.hpp"
#include "apsense/common/fs.hpp"
#include "apsense/geo/dbscan.hpp"
#include "apsense/geo/hotspots.hpp"
#include "apsense/geo/io.hpp"
#include "apsense/geo/kdistance.hpp"
#include "apsense/hud/simulate.hpp"
#include "apsense/imagery/client.hpp"
#include "apsense/imagery/codec.hpp"
#include "apsense/imagery/fetcher.hpp"
#include "apsense/imagery/manifest.hpp"
#include "apsense/imagery/plan.hpp"
#include "apsense/imagery/preprocess.hpp"
#include "apsense/metrics/confidence.hpp"
#include "apsense/metrics/masking.hpp"
#include "apsense/metrics/report.hpp"
#include "apsense/metrics/saliency.hpp"
#include "apsense/nn/checkpoint.hpp"
#include "apsense/nn/classifier.hpp"
#include "apsense/nn/train.hpp"

namespace apsense::cli {

namespace sfs = std::filesystem;

namespace {

void ensure_parent(const sfs::path& file) {
  const sfs::path dir = file.parent_path();
  if (!dir.empty()) sfs::create_directories(dir);
}

void require_set(const std::string& value, const std::string& key) {
  if (value.empty()) fail_config("config key " + key + " must be set");
}

/// Upstream artifacts get an error that names the command producing them.
void require_artifact(const std::string& value, const std::string& key,
                      const std::string& producer) {
  require_set(value, key);
  if (!sfs::exists(value)) {
    std::string msg = key + " not found: " + value;
    if (!producer.empty()) msg += "; produce it with the " + producer + " command";
    fail_io(msg);
  }
}

std::string model_name(const nn::AbmClassifier& model) {
  return model.backbone().name() + "+abm-" + nn::to_string(model.variant());
}

int resolve_edge(const RunConfig& cfg, const std::string& key,
                 const nn::Backbone& backbone) {
  const int edge = cfg.integer(key);
  if (edge == 0) return backbone.preferred_input_size();
  if (edge < 8) fail_config(key + " must be 0 (backbone default) or at least 8");
  return edge;
}

imagery::ImageU8 load_sized(const std::string& path, int edge) {
  imagery::ImageU8 img = imagery::read_image(path);
  if (img.c != 3) fail_input("image is not RGB: " + path);
  if (img.h == edge && img.w == edge) return img;
  return imagery::resize_bilinear(img, edge, edge);
}

std::vector<nn::TrainSample> load_split_samples(
    const imagery::DatasetManifest& manifest, imagery::Split split, int edge,
    const nn::Backbone& backbone) {
  std::vector<nn::TrainSample> samples;
  for (const auto& entry : manifest.for_split(split)) {
    nn::TrainSample s;
    s.input = imagery::to_model_input(load_sized(entry.path, edge),
                                      backbone.input_mean(), backbone.input_std());
    s.label = imagery::to_class_index(entry.label);
    samples.push_back(std::move(s));
  }
  return samples;
}

/// Target-class selector: a fixed class, or the model's prediction.
std::optional<int> parse_target_class(const std::string& s) {
  if (s == "hotspot") return nn::kClassHotspot;
  if (s == "non_hotspot") return nn::kClassNonHotspot;
  if (s == "predicted") return std::nullopt;
  fail_config("target_class must be hotspot, non_hotspot or predicted, got: " + s);
}

double prob_of(const nn::ClassScores& scores, int cls) {
  return cls == nn::kClassHotspot ? scores.p_hotspot : scores.p_non_hotspot;
}

int predicted_class(const nn::ClassScores& scores) {
  return scores.p_hotspot >= scores.p_non_hotspot ? nn::kClassHotspot
                                                  : nn::kClassNonHotspot;
}

std::vector<cam::Method> parse_methods(const std::vector<std::string>& names) {
  if (names.empty()) fail_config("at least one explanation method is required");
  std::vector<cam::Method> methods;
  for (const auto& n : names) methods.push_back(cam::method_from_string(n));
  return methods;
}

}  // namespace

CommandResult cmd_cluster(const RunConfig& cfg) {
  const std::string collisions = cfg.str("cluster.collisions_csv");
  require_artifact(collisions, "cluster.collisions_csv", "");
  const auto records = geo::load_collision_csv(collisions);

  geo::DbscanParams params;
  params.epsilon = cfg.number("cluster.epsilon");
  params.min_points = cfg.integer("cluster.min_points");
  const geo::ClusterLabeling labeling = geo::dbscan(records, params);
  const auto hotspots = geo::hotspots_from_labeling(records, labeling);

  const sfs::path out_dir = cfg.str("cluster.out_dir");
  sfs::create_directories(out_dir);
  CommandResult result;

  const sfs::path hotspot_csv = out_dir / "hotspots.csv";
  geo::write_hotspot_csv(hotspot_csv.string(), hotspots);
  result.outputs.push_back(hotspot_csv.string());

  const sfs::path geojson = out_dir / "hotspots.geojson";
  geo::write_hotspot_geojson(geojson.string(), hotspots);
  result.outputs.push_back(geojson.string());

  std::string noise = "latitude,longitude\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (labeling.labels[i] == geo::kNoise) {
      noise += csv::format_double(records[i].lat) + "," +
               csv::format_double(records[i].lon) + "\n";
    }
  }
  const sfs::path noise_csv = out_dir / "noise.csv";
  fs::atomic_write(noise_csv, noise);
  result.outputs.push_back(noise_csv.string());

  if (cfg.boolean("cluster.write_k_distance")) {
    const int k = cfg.integer("cluster.k_for_curve");
    const geo::KDistanceCurve curve = geo::k_distance_curve(records, k);
    std::string body = "index,distance\n";
    for (std::size_t i = 0; i < curve.distances.size(); ++i) {
      body += std::to_string(i) + "," + csv::format_double(curve.distances[i]) + "\n";
    }
    const sfs::path curve_csv = out_dir / "k_distance.csv";
    fs::atomic_write(curve_csv, body);
    result.outputs.push_back(curve_csv.string());

    nlohmann::json knee{{"k", curve.k}};
    if (curve.knee_index) {
      knee["knee_index"] = *curve.knee_index;
      knee["epsilon_at_knee"] = curve.distances[*curve.knee_index];
    } else {
      knee["knee_index"] = nullptr;
      knee["epsilon_at_knee"] = nullptr;
    }
    const sfs::path knee_json = out_dir / "k_distance.json";
    fs::atomic_write(knee_json, knee.dump(2) + "\n");
    result.outputs.push_back(knee_json.string());
  }
  return result;
}

CommandResult cmd_fetch(const RunConfig& cfg) {
  require_artifact(cfg.str("fetch.hotspot_csv"), "fetch.hotspot_csv", "cluster");
  require_artifact(cfg.str("fetch.noise_csv"), "fetch.noise_csv", "cluster");
  const auto hotspots = geo::load_hotspot_csv(cfg.str("fetch.hotspot_csv"));
  const auto noise = geo::load_collision_csv(cfg.str("fetch.noise_csv"));
  if (hotspots.empty()) fail_input("hotspot CSV has no rows; nothing to fetch");

  const std::uint64_t seed = cfg.u64("seed");
  const int max_per_class = cfg.integer("fetch.max_per_class");
  if (max_per_class < 0) fail_config("fetch.max_per_class must be >= 0");

  std::size_t n_hot = hotspots.size();
  if (max_per_class > 0) n_hot = std::min(n_hot, static_cast<std::size_t>(max_per_class));

  // Non-hotspot locations are drawn from the noise-labeled records,
  // capped so the classes stay balanced.
  std::size_t n_non = std::min(noise.size(), n_hot);
  std::vector<std::size_t> order(noise.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<imagery::PlannedLocation> locations;
  locations.reserve(n_hot + n_non);
  for (std::size_t i = 0; i < n_hot; ++i) {
    locations.push_back({hotspots[i].lat, hotspots[i].lon, imagery::SceneLabel::hotspot});
  }
  for (std::size_t i = 0; i < n_non; ++i) {
    const auto& r = noise[order[i]];
    locations.push_back({r.lat, r.lon, imagery::SceneLabel::non_hotspot});
  }

  auto requests = imagery::plan_requests(locations);
  const double fov = cfg.number("fetch.fov_deg");
  if (fov < 0.0 || fov > 360.0) fail_config("fetch.fov_deg must be in [0, 360]");
  if (fov > 0.0) {
    for (auto& r : requests) r.fov_deg = fov;
  }

  std::unique_ptr<imagery::StreetViewClient> client;
  const std::string mode = cfg.str("fetch.mode");
  if (mode == "mock") {
    const std::string fixtures = cfg.str("fetch.fixture_dir");
    require_set(fixtures, "fetch.fixture_dir");
    client = std::make_unique<imagery::MockClient>(fixtures);
  } else if (mode == "live") {
    const std::string env_name = cfg.str("fetch.api_key_env");
    require_set(env_name, "fetch.api_key_env");
    const char* key = std::getenv(env_name.c_str());
    if (key == nullptr || *key == '\0') {
      fail_config("environment variable " + env_name +
                  " must hold the street-view API key");
    }
    client = std::make_unique<imagery::HttpStreetViewClient>(cfg.str("fetch.host"), key);
  } else {
    fail_config("fetch.mode must be mock or live, got: " + mode);
  }

  imagery::FetcherOptions options;
  options.cache_dir = cfg.str("fetch.cache_dir");
  options.parallelism = cfg.integer("fetch.parallelism");
  options.requests_per_second = cfg.number("fetch.requests_per_second");
  options.burst = cfg.integer("fetch.burst");
  options.max_retries = cfg.integer("fetch.max_retries");
  const auto fetched = imagery::fetch_all(requests, *client, options);

  std::vector<imagery::LabeledImage> images;
  for (const auto& f : fetched) {
    if (!f.skipped) images.push_back({f.path.string(), f.label});
  }
  if (images.empty()) fail_input("no imagery available for any planned location");

  imagery::SplitFractions fractions;
  fractions.train = cfg.number("fetch.train_fraction");
  fractions.test = cfg.number("fetch.test_fraction");
  fractions.val = cfg.number("fetch.val_fraction");
  const auto manifest = imagery::build_manifest(images, fractions, seed);

  const sfs::path manifest_path = cfg.str("fetch.manifest");
  ensure_parent(manifest_path);
  imagery::write_manifest(manifest, manifest_path);
  return CommandResult{{manifest_path.string()}};
}

CommandResult cmd_train(const RunConfig& cfg) {
  require_artifact(cfg.str("train.manifest"), "train.manifest", "fetch");
  const auto manifest = imagery::load_manifest(cfg.str("train.manifest"));

  nn::AbmClassifier model = nn::make_classifier(
      cfg.str("train.backbone"),
      nn::abm_variant_from_string(cfg.str("train.variant")),
      cfg.integer("train.compression"), cfg.u64("seed"));

  const int edge = resolve_edge(cfg, "train.input_size", model.backbone());
  const auto train_set =
      load_split_samples(manifest, imagery::Split::train, edge, model.backbone());
  const auto val_set =
      load_split_samples(manifest, imagery::Split::val, edge, model.backbone());

  nn::TrainConfig tc;
  tc.epochs = cfg.integer("train.epochs");
  tc.batch_size = cfg.integer("train.batch_size");
  tc.learning_rate = cfg.number("train.learning_rate");
  tc.momentum = cfg.number("train.momentum");
  tc.fc_only = cfg.boolean("train.fc_only");
  tc.seed = cfg.u64("seed");
  const nn::TrainResult trained = nn::train_classifier(model, train_set, val_set, tc);

  const sfs::path ckpt = cfg.str("train.checkpoint");
  ensure_parent(ckpt);
  nn::save_checkpoint(model, ckpt);

  std::string log = "epoch,train_loss,val_loss,val_accuracy\n";
  for (const auto& e : trained.history) {
    log += csv::join_row({std::to_string(e.epoch), csv::format_double(e.train_loss),
                          csv::format_double(e.val_loss),
                          csv::format_double(e.val_accuracy)});
    log += '\n';
  }
  const sfs::path log_csv = cfg.str("train.log_csv");
  ensure_parent(log_csv);
  fs::atomic_write(log_csv, log);
  return CommandResult{{ckpt.string(), log_csv.string()}};
}

CommandResult cmd_explain(const RunConfig& cfg) {
  require_artifact(cfg.str("explain.checkpoint"), "explain.checkpoint", "train");
  require_artifact(cfg.str("explain.manifest"), "explain.manifest", "fetch");
  nn::AbmClassifier model = nn::load_checkpoint(cfg.str("explain.checkpoint"));
  const auto manifest = imagery::load_manifest(cfg.str("explain.manifest"));

  auto entries = manifest.for_split(imagery::split_from_string(cfg.str("explain.split")));
  const int max_images = cfg.integer("explain.max_images");
  if (max_images > 0 && entries.size() > static_cast<std::size_t>(max_images)) {
    entries.resize(static_cast<std::size_t>(max_images));
  }
  if (entries.empty()) {
    fail_input("manifest split '" + cfg.str("explain.split") + "' is empty");
  }

  const int edge = resolve_edge(cfg, "explain.input_size", model.backbone());
  const auto methods = parse_methods(cfg.string_list("explain.methods"));
  const nn::CamTarget target = nn::cam_target_from_string(cfg.str("explain.cam_target"));
  const auto fixed_class = parse_target_class(cfg.str("explain.target_class"));
  const double tau = cfg.number("explain.threshold");
  const bool use_otsu = cfg.boolean("explain.use_otsu");
  const apf::BandRule band = apf::BandRule::for_height(edge);

  const sfs::path out_dir = cfg.str("explain.out_dir");
  sfs::create_directories(out_dir);

  std::string index =
      "image,label,target_class,p_hotspot,method,area_fraction_percent,"
      "heatmap,mask,contours,overlay\n";
  std::vector<std::vector<double>> areas(methods.size());

  for (const auto& entry : entries) {
    const imagery::ImageU8 sized = load_sized(entry.path, edge);
    const nn::Tensor input = imagery::to_model_input(
        sized, model.backbone().input_mean(), model.backbone().input_std());
    const nn::ClassScores scores = model.predict(input);
    const int cls = fixed_class ? *fixed_class : predicted_class(scores);

    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      const cam::Heatmap heat =
          cam::compute_cam(model, input, methods[mi], cls, target, edge, edge);
      const double tau_used = use_otsu ? apf::otsu_threshold(heat.v) : tau;
      const apf::ContourSet contours = apf::run_pipeline(heat, tau_used, band);

      const std::string stem =
          sfs::path(entry.path).stem().string() + "__" + cam::to_string(methods[mi]);
      const sfs::path heat_png = out_dir / (stem + "__heat.png");
      const sfs::path mask_png = out_dir / (stem + "__mask.png");
      const sfs::path contours_json = out_dir / (stem + "__contours.json");
      const sfs::path overlay_png = out_dir / (stem + "__overlay.png");
      cam::write_heatmap(heat_png, heat);
      apf::write_mask_png(mask_png, contours.mask);
      apf::write_contours_json(contours_json, contours);
      imagery::write_png(overlay_png, apf::render_overlay(sized, contours));

      areas[mi].push_back(contours.area_fraction_percent);
      index += csv::join_row({entry.path, imagery::to_string(entry.label),
                              std::to_string(cls), csv::format_double(scores.p_hotspot),
                              cam::to_string(methods[mi]),
                              csv::format_double(contours.area_fraction_percent),
                              heat_png.string(), mask_png.string(),
                              contours_json.string(), overlay_png.string()});
      index += '\n';
    }
  }

  const sfs::path index_csv = out_dir / "index.csv";
  fs::atomic_write(index_csv, index);

  std::vector<metrics::MetricRow> rows;
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const double mean =
        std::accumulate(areas[mi].begin(), areas[mi].end(), 0.0) /
        static_cast<double>(areas[mi].size());
    rows.push_back({model_name(model), cam::to_string(methods[mi]), "-", std::nullopt,
                    "area_fraction_percent", mean, static_cast<int>(areas[mi].size())});
  }
  const sfs::path metrics_csv = out_dir / "metrics.csv";
  metrics::write_metric_csv(metrics_csv, rows);

  return CommandResult{{index_csv.string(), metrics_csv.string(), out_dir.string()}};
}

CommandResult cmd_evaluate(const RunConfig& cfg) {
  require_artifact(cfg.str("evaluate.checkpoint"), "evaluate.checkpoint", "train");
  require_artifact(cfg.str("evaluate.manifest"), "evaluate.manifest", "fetch");
  nn::AbmClassifier model = nn::load_checkpoint(cfg.str("evaluate.checkpoint"));
  const auto manifest = imagery::load_manifest(cfg.str("evaluate.manifest"));

  auto entries =
      manifest.for_split(imagery::split_from_string(cfg.str("evaluate.split")));
  const int max_images = cfg.integer("evaluate.max_images");
  if (max_images > 0 && entries.size() > static_cast<std::size_t>(max_images)) {
    entries.resize(static_cast<std::size_t>(max_images));
  }
  if (entries.empty()) {
    fail_input("manifest split '" + cfg.str("evaluate.split") + "' is empty");
  }

  const int edge = resolve_edge(cfg, "evaluate.input_size", model.backbone());
  const auto methods = parse_methods(cfg.string_list("evaluate.methods"));
  const nn::CamTarget target = nn::cam_target_from_string(cfg.str("evaluate.cam_target"));
  const auto fixed_class = parse_target_class(cfg.str("evaluate.target_class"));
  const double tau = cfg.number("evaluate.threshold");
  const bool use_otsu = cfg.boolean("evaluate.use_otsu");
  const apf::BandRule band = apf::BandRule::for_height(edge);
  const std::string saliency_dir = cfg.str("evaluate.saliency_dir");

  // One masking pass per slot; road imputation expands to one slot per
  // configured percentage.
  struct Slot {
    metrics::MaskStrategy strategy;
    std::optional<double> threshold;
  };
  std::vector<Slot> slots;
  for (const auto& name : cfg.string_list("evaluate.strategies")) {
    const metrics::MaskStrategyKind kind = metrics::mask_strategy_from_string(name);
    if (kind == metrics::MaskStrategyKind::road_imputation) {
      for (double t : cfg.number_list("evaluate.road_thresholds")) {
        if (!(t > 0.0) || t > 100.0) {
          fail_config("evaluate.road_thresholds entries must be in (0, 100]");
        }
        slots.push_back({{kind, t}, t});
      }
    } else {
      slots.push_back({{kind, 0.0}, std::nullopt});
    }
  }

  const std::array<double, 3> mean = model.backbone().input_mean();
  const std::array<double, 3> stddev = model.backbone().input_std();

  std::vector<imagery::ImageU8> sized_images;
  std::vector<nn::TrainSample> samples;
  for (const auto& entry : entries) {
    sized_images.push_back(load_sized(entry.path, edge));
    nn::TrainSample s;
    s.input = imagery::to_model_input(sized_images.back(), mean, stddev);
    s.label = imagery::to_class_index(entry.label);
    samples.push_back(std::move(s));
  }

  std::vector<metrics::MetricRow> rows;
  const std::string model_id = model_name(model);
  const int n_images = static_cast<int>(entries.size());

  const nn::BinaryMetrics bm = nn::evaluate_classifier(model, samples);
  rows.push_back({model_id, "-", "-", std::nullopt, "accuracy", bm.accuracy, n_images});
  rows.push_back({model_id, "-", "-", std::nullopt, "precision", bm.precision, n_images});
  rows.push_back({model_id, "-", "-", std::nullopt, "recall", bm.recall, n_images});
  rows.push_back({model_id, "-", "-", std::nullopt, "f1", bm.f1, n_images});

  using Records = std::vector<metrics::ConfidenceRecord>;
  std::vector<std::vector<Records>> records(
      methods.size(), std::vector<Records>(slots.size()));
  std::vector<std::vector<std::optional<double>>> saliency(methods.size());

  for (std::size_t ii = 0; ii < entries.size(); ++ii) {
    const imagery::ImageU8& sized = sized_images[ii];
    const nn::Tensor& input = samples[ii].input;
    const nn::ClassScores scores = model.predict(input);
    const int cls = fixed_class ? *fixed_class : predicted_class(scores);
    const double y = prob_of(scores, cls);

    imagery::ImageU8 saliency_map;
    if (!saliency_dir.empty()) {
      const sfs::path map_path =
          sfs::path(saliency_dir) / (sfs::path(entries[ii].path).stem().string() + ".png");
      if (!sfs::exists(map_path)) {
        fail_io("saliency map not found: " + map_path.string());
      }
      saliency_map = imagery::read_image(map_path);
    }

    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      const cam::Heatmap heat =
          cam::compute_cam(model, input, methods[mi], cls, target, edge, edge);
      const double tau_used = use_otsu ? apf::otsu_threshold(heat.v) : tau;
      const apf::ContourSet contours = apf::run_pipeline(heat, tau_used, band);
      const apf::Mask& region = contours.mask;

      for (std::size_t si = 0; si < slots.size(); ++si) {
        const imagery::ImageU8 masked =
            metrics::apply_mask_strategy(sized, &heat.v, &region, slots[si].strategy);
        const double p =
            prob_of(model.predict(imagery::to_model_input(masked, mean, stddev)), cls);
        metrics::ConfidenceRecord rec;
        rec.y = y;
        if (slots[si].strategy.kind == metrics::MaskStrategyKind::explain_only) {
          rec.e = p;
        } else {
          rec.o = p;
        }
        records[mi][si].push_back(rec);
      }

      if (!saliency_dir.empty()) {
        saliency[mi].push_back(
            metrics::visual_saliency_percent(saliency_map, region));
      }
    }
  }

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const std::string method = cam::to_string(methods[mi]);
    for (std::size_t si = 0; si < slots.size(); ++si) {
      const std::string strategy = metrics::to_string(slots[si].strategy.kind);
      const auto threshold = slots[si].threshold;
      const Records& recs = records[mi][si];
      if (slots[si].strategy.kind == metrics::MaskStrategyKind::explain_only) {
        rows.push_back({model_id, method, strategy, threshold, "cam_confidence_change",
                        metrics::cam_confidence_change(recs), n_images});
        rows.push_back({model_id, method, strategy, threshold, "increase_in_confidence",
                        static_cast<double>(metrics::increase_in_confidence(recs)),
                        n_images});
      } else {
        const metrics::MeanStat drop = metrics::confidence_change_percent(recs);
        rows.push_back({model_id, method, strategy, threshold,
                        "confidence_change_percent", drop.value, drop.used});
        rows.push_back({model_id, method, strategy, threshold,
                        "average_confidence_change",
                        metrics::average_confidence_change(recs), n_images});
      }
    }
    if (!saliency_dir.empty()) {
      const metrics::SaliencyAggregate vs =
          metrics::aggregate_visual_saliency(saliency[mi]);
      rows.push_back({model_id, method, "-", std::nullopt, "visual_saliency_percent",
                      vs.mean, vs.used});
    }
  }

  const sfs::path out_csv = cfg.str("evaluate.out_csv");
  ensure_parent(out_csv);
  metrics::write_metric_csv(out_csv, rows);
  return CommandResult{{out_csv.string()}};
}

CommandResult cmd_simulate(const RunConfig& cfg) {
  require_artifact(cfg.str("simulate.plan"), "simulate.plan", "");
  const hud::SimulationPlan plan = hud::load_simulation_plan(cfg.str("simulate.plan"));
  const auto steps = hud::simulate(plan);
  const sfs::path out_csv = cfg.str("simulate.out_csv");
  ensure_parent(out_csv);
  hud::write_simulation_csv(out_csv, steps);
  return CommandResult{{out_csv.string()}};
}

CommandResult cmd_monitor(const RunConfig& cfg) {
  require_artifact(cfg.str("monitor.trace_csv"), "monitor.trace_csv", "");
  require_artifact(cfg.str("monitor.hotspot_csv"), "monitor.hotspot_csv", "cluster");
  const auto trace = load_trace_csv(cfg.str("monitor.trace_csv"));
  const auto hotspots = geo::load_hotspot_csv(cfg.str("monitor.hotspot_csv"));
  const auto events = monitor_trace(trace, hotspots, cfg.number("monitor.radius_m"),
                                    cfg.number("monitor.hysteresis_m"));
  const sfs::path out_csv = cfg.str("monitor.out_csv");
  ensure_parent(out_csv);
  write_mode_events_csv(out_csv, events);
  return CommandResult{{out_csv.string()}};
}

CommandResult run_command(const std::string& name, const RunConfig& cfg) {
  using Fn = CommandResult (*)(const RunConfig&);
  static const std::pair<const char*, Fn> table[] = {
      {"cluster", cmd_cluster},   {"fetch", cmd_fetch},
      {"train", cmd_train},       {"explain", cmd_explain},
      {"evaluate", cmd_evaluate}, {"simulate", cmd_simulate},
      {"monitor", cmd_monitor},
  };
  Fn fn = nullptr;
  for (const auto& [cmd, f] : table) {
    if (name == cmd) {
      fn = f;
      break;
    }
  }
  if (fn == nullptr) fail_config("unknown command: " + name);

  const auto start = std::chrono::steady_clock::now();
  CommandResult result = fn(cfg);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();

  const sfs::path records_path = cfg.str("run_records");
  ensure_parent(records_path);
  const nlohmann::json record{{"command", name},
                              {"config_hash", cfg.hash()},
                              {"seed", cfg.u64("seed")},
                              {"duration_ms", ms},
                              {"outputs", result.outputs}};
  std::ofstream out(records_path, std::ios::app);
  if (!out) fail_io("cannot append run record: " + records_path.string());
  out << record.dump() << '\n';
  if (!out.flush()) fail_io("cannot write run record: " + records_path.string());
  return result;
}

}  // namespace apsense::cli
