#include "lapsim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lapsim/dataset.hpp"
#include "lapsim/io.hpp"
#include "lapsim/metrics.hpp"
#include "lapsim/parallel.hpp"
#include "lapsim/rng.hpp"
#include "lapsim/viz.hpp"

namespace fs = std::filesystem;

namespace lapsim::cli {

namespace {

using ojson = nlohmann::ordered_json;

int resolve_jobs(int cli_jobs) {
  if (cli_jobs > 0)
    return cli_jobs;
  if (const char* env = std::getenv("LAPSIM_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0)
      return v;
  }
  return 0; // one worker per hardware thread
}

DegradationConfig config_or_defaults(const std::string& config_path) {
  if (config_path.empty())
    return DegradationConfig::defaults();
  return load_config(config_path);
}

std::string format_double(double v) {
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------

int cmd_synth(const std::string& config_path, const std::string& input_dir,
              const std::string& output_dir, std::optional<uint64_t> seed, int jobs) {
  DegradationConfig cfg = config_or_defaults(config_path);
  if (seed)
    cfg.master_seed = *seed;
  const DatasetManifest manifest =
      synthesize_dataset(input_dir, output_dir, cfg, resolve_jobs(jobs), &std::cerr);
  std::cout << "pairs: " << manifest.entries.size() << "\n"
            << "manifest: " << (fs::path(output_dir) / "manifest.json").string() << "\n";
  return kOk;
}

int cmd_degrade_one(const std::string& config_path, const std::string& input_path,
                    const std::string& output_dir, std::optional<uint64_t> seed) {
  DegradationConfig cfg = config_or_defaults(config_path);
  if (seed)
    cfg.master_seed = *seed;
  if (!fs::is_regular_file(input_path))
    throw input_error("input image '" + input_path + "' does not exist");

  const Image clean = read_image_gray(input_path);
  const PerImageParams params = sample_per_image_params(cfg, 0);
  DegradationConfig local = cfg;
  local.noise.seed = mix_seed(params.seed, 3);
  const DegradeResult result = degrade_one(clean, params.roll, params.pitch, local);

  fs::create_directories(output_dir);
  const fs::path out(output_dir);
  write_png_gray16((out / "clean.png").string(), clean);
  write_png_gray16((out / "degraded.png").string(), result.degraded);

  Sidecar sc;
  sc.width = static_cast<uint32_t>(clean.width());
  sc.height = static_cast<uint32_t>(clean.height());
  for (int m = 0; m < cfg.M; ++m) {
    const JitterCurve roll = sample_ideal_curve(params.roll, clean.width(), cfg.tau_s, m,
                                                cfg.M, Direction::roll);
    const JitterCurve pitch = sample_ideal_curve(params.pitch, clean.width(), cfg.tau_s,
                                                 m, cfg.M, Direction::pitch);
    sc.records.push_back(SidecarRecord{Direction::roll, static_cast<uint32_t>(m), roll.samples});
    sc.records.push_back(
        SidecarRecord{Direction::pitch, static_cast<uint32_t>(m), pitch.samples});
  }
  write_sidecar((out / "sidecar.lapj").string(), sc);

  std::cout << "degraded: " << (out / "degraded.png").string() << "\n"
            << "sidecar: " << (out / "sidecar.lapj").string() << "\n";
  return kOk;
}

int cmd_precorrect(const std::string& manifest_path, const std::string& output_dir,
                   std::optional<double> bound, std::optional<uint64_t> seed, int margin,
                   int jobs) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  MeasurementErrorModel measurement = manifest.config.measurement;
  if (bound)
    measurement.relative_bound = *bound;
  if (seed)
    measurement.seed = *seed;
  const PrecorrectResult result = precorrect_dataset(
      manifest, measurement, output_dir, margin, resolve_jobs(jobs), &std::cerr);
  std::cout << "entries: " << result.manifest.entries.size() << "\n"
            << "failed: " << result.failed_entries << "\n"
            << "manifest: " << (fs::path(output_dir) / "manifest.json").string() << "\n";
  return result.failed_entries == 0 ? kOk : kIntegrityError;
}

int cmd_eval(const std::string& manifest_path, const std::string& variant,
             const std::string& output_prefix, int margin, int jobs) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  const bool use_precorrected = variant == "precorrected";

  struct Row {
    uint64_t index = 0;
    bool ok = false;
    std::string error;
    MetricReport report;
  };
  std::vector<Row> rows(manifest.entries.size());

  run_parallel(manifest.entries.size(), resolve_jobs(jobs), [&](size_t i) {
    const ManifestEntry& e = manifest.entries[i];
    Row& row = rows[i];
    row.index = e.index;
    const std::string& test_path = use_precorrected ? e.precorrected_path : e.degraded_path;
    try {
      if (test_path.empty())
        throw input_error("no " + variant + " image recorded for this entry");
      const Image ref = read_image_gray(e.clean_path);
      const Image test = read_image_gray(test_path);
      row.report = evaluate_pair(ref, test, margin);
      row.ok = true;
    } catch (const std::exception& ex) {
      row.error = ex.what();
    }
  });

  std::string csv = "index,status,psnr_db,ssim,gmsd,spectral_l1\n";
  size_t failed = 0, finite_psnr = 0, infinite_psnr = 0;
  double sum_psnr = 0.0, sum_ssim = 0.0, sum_gmsd = 0.0, sum_spec = 0.0;
  ojson pairs = ojson::array();
  for (const Row& row : rows) {
    if (!row.ok) {
      ++failed;
      csv += std::to_string(row.index) + ",error,,,,\n";
      pairs.push_back(ojson{{"index", row.index}, {"status", "error"}, {"message", row.error}});
      continue;
    }
    const MetricReport& m = row.report;
    csv += std::to_string(row.index) + ",ok," + format_double(m.psnr_db) + "," +
           format_double(m.ssim) + "," + format_double(m.gmsd) + "," +
           format_double(m.spectral_l1) + "\n";
    ojson jm;
    jm["index"] = row.index;
    jm["status"] = "ok";
    if (std::isinf(m.psnr_db))
      jm["psnr_db"] = "inf";
    else
      jm["psnr_db"] = m.psnr_db;
    jm["ssim"] = m.ssim;
    jm["gmsd"] = m.gmsd;
    jm["spectral_l1"] = m.spectral_l1;
    pairs.push_back(std::move(jm));

    if (std::isinf(m.psnr_db))
      ++infinite_psnr;
    else {
      sum_psnr += m.psnr_db;
      ++finite_psnr;
    }
    sum_ssim += m.ssim;
    sum_gmsd += m.gmsd;
    sum_spec += m.spectral_l1;
  }
  const size_t ok_count = rows.size() - failed;

  ojson summary;
  summary["variant"] = variant;
  summary["margin"] = margin;
  summary["pairs_total"] = rows.size();
  summary["pairs_failed"] = failed;
  summary["psnr_infinite"] = infinite_psnr;
  summary["mean_psnr_db"] =
      finite_psnr ? ojson(sum_psnr / static_cast<double>(finite_psnr)) : ojson(nullptr);
  summary["mean_ssim"] =
      ok_count ? ojson(sum_ssim / static_cast<double>(ok_count)) : ojson(nullptr);
  summary["mean_gmsd"] =
      ok_count ? ojson(sum_gmsd / static_cast<double>(ok_count)) : ojson(nullptr);
  summary["mean_spectral_l1"] =
      ok_count ? ojson(sum_spec / static_cast<double>(ok_count)) : ojson(nullptr);

  ojson doc;
  doc["summary"] = summary;
  doc["pairs"] = std::move(pairs);

  if (const fs::path parent = fs::path(output_prefix).parent_path(); !parent.empty())
    fs::create_directories(parent);
  write_file_bytes(output_prefix + ".csv", csv.data(), csv.size());
  const std::string json_text = doc.dump(2) + "\n";
  write_file_bytes(output_prefix + ".json", json_text.data(), json_text.size());

  std::cout << "pairs: " << rows.size() << "\nfailed: " << failed << "\nreport: "
            << output_prefix << ".{csv,json}\n";
  return failed == 0 ? kOk : kInputError;
}

int cmd_flow_viz(const std::string& sidecar_path, const std::string& output_path,
                 int height_override) {
  const Sidecar sc = read_sidecar(sidecar_path);
  const std::vector<JitterCurve> rolls = sc.curves(Direction::roll);
  const std::vector<JitterCurve> pitches = sc.curves(Direction::pitch);
  if (rolls.empty() && pitches.empty())
    throw integrity_error("sidecar '" + sidecar_path + "' holds no curve records");

  auto average = [&](const std::vector<JitterCurve>& curves, Direction dir) {
    JitterCurve avg;
    avg.direction = dir;
    avg.samples.assign(sc.width, 0.0);
    if (curves.empty())
      return avg;
    for (const JitterCurve& c : curves)
      for (uint32_t k = 0; k < sc.width; ++k)
        avg.samples[k] += c.samples[k];
    for (double& v : avg.samples)
      v /= static_cast<double>(curves.size());
    return avg;
  };
  const JitterCurve roll = average(rolls, Direction::roll);
  const JitterCurve pitch = average(pitches, Direction::pitch);

  int height = height_override > 0 ? height_override
                                   : (sc.height > 0 ? static_cast<int>(sc.height) : 240);
  const FlowField flow = build_jitter_map(roll, pitch, height);

  if (const fs::path parent = fs::path(output_path).parent_path(); !parent.empty())
    fs::create_directories(parent);
  write_png_rgb8(output_path, colorize_flow(flow));
  std::cout << "flow-viz: " << output_path << "\n";
  return kOk;
}

int cmd_curve_plot(const std::string& sidecar_path, const std::string& output_prefix,
                   double bound, uint64_t seed) {
  const Sidecar sc = read_sidecar(sidecar_path);
  if (bound < 0.0 || bound > 1.0)
    throw config_error("curve-plot: --bound must be in [0,1]");

  struct CurveFamily {
    bool present = false;
    JitterCurve ideal, cdsm, noisy, cdsm_noisy;
  };

  auto derive = [&](Direction dir, uint64_t dir_tag) {
    CurveFamily fam;
    const std::vector<JitterCurve> curves = sc.curves(dir);
    if (curves.empty())
      return fam;
    fam.present = true;
    fam.ideal = curves[0]; // subdivision m = 0 is the plain per-line sampling

    fam.cdsm.direction = dir;
    fam.cdsm.samples.assign(sc.width, 0.0);
    for (const JitterCurve& c : curves)
      for (uint32_t k = 0; k < sc.width; ++k)
        fam.cdsm.samples[k] += c.samples[k];
    for (double& v : fam.cdsm.samples)
      v /= static_cast<double>(curves.size());

    // Same per-subdivision seed scheme as cdsm_noisy_subdivisions.
    const uint64_t base = mix_seed(seed, dir_tag);
    fam.noisy = add_measurement_error(fam.ideal, MeasurementErrorModel{bound, base});
    fam.cdsm_noisy.direction = dir;
    fam.cdsm_noisy.samples.assign(sc.width, 0.0);
    for (size_t m = 0; m < curves.size(); ++m) {
      MeasurementErrorModel model{bound, m == 0 ? base : mix_seed(base, m)};
      const JitterCurve noisy = add_measurement_error(curves[m], model);
      for (uint32_t k = 0; k < sc.width; ++k)
        fam.cdsm_noisy.samples[k] += noisy.samples[k];
    }
    for (double& v : fam.cdsm_noisy.samples)
      v /= static_cast<double>(curves.size());
    return fam;
  };

  const CurveFamily roll = derive(Direction::roll, 0);
  const CurveFamily pitch = derive(Direction::pitch, 1);
  if (!roll.present && !pitch.present)
    throw integrity_error("sidecar '" + sidecar_path + "' holds no curve records");

  if (const fs::path parent = fs::path(output_prefix).parent_path(); !parent.empty())
    fs::create_directories(parent);

  std::string csv = "column";
  for (const auto* fam : {&roll, &pitch})
    if (fam->present) {
      const char* d = fam == &roll ? "roll" : "pitch";
      csv += std::string(",ideal_") + d + ",cdsm_" + d + ",noisy_" + d + ",cdsm_noisy_" + d;
    }
  csv += "\n";
  for (uint32_t k = 0; k < sc.width; ++k) {
    csv += std::to_string(k + 1);
    for (const auto* fam : {&roll, &pitch})
      if (fam->present)
        csv += "," + format_double(fam->ideal.samples[k]) + "," +
               format_double(fam->cdsm.samples[k]) + "," +
               format_double(fam->noisy.samples[k]) + "," +
               format_double(fam->cdsm_noisy.samples[k]);
    csv += "\n";
  }
  write_file_bytes(output_prefix + ".csv", csv.data(), csv.size());

  const CurveFamily& plotted = roll.present ? roll : pitch;
  std::vector<PlotSeries> series;
  series.push_back(PlotSeries{"ideal", plotted.ideal.samples, 0, 0, 0});
  series.push_back(PlotSeries{"cdsm", plotted.cdsm.samples, 40, 90, 200});
  series.push_back(PlotSeries{"noisy", plotted.noisy.samples, 235, 150, 150});
  series.push_back(PlotSeries{"cdsm noisy", plotted.cdsm_noisy.samples, 200, 30, 30});
  write_png_rgb8(output_prefix + ".png",
                 render_line_plot(series, roll.present ? "ROLL PX" : "PITCH PX"));

  std::cout << "curve-plot: " << output_prefix << ".{csv,png}\n";
  return kOk;
}

} // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"LAP jitter degradation, pre-correction and evaluation toolkit"};
  app.require_subcommand(1);

  std::string config_path, input_path, output_path, manifest_path, variant = "degraded";
  std::optional<uint64_t> seed;
  std::optional<double> bound;
  int margin = 0;
  int precorrect_margin = 16;
  int jobs = 0;
  int viz_height = 0;
  uint64_t plot_seed = 0;
  double plot_bound = 0.2;

  CLI::App* synth = app.add_subcommand("synth", "Synthesize a degraded/clean LAP dataset");
  synth->add_option("--config,-c", config_path, "JSON config file (defaults when omitted)");
  synth->add_option("--input,-i", input_path, "directory of clean PNG images")->required();
  synth->add_option("--output,-o", output_path, "output dataset directory")->required();
  synth->add_option("--seed", seed, "override master_seed");
  synth->add_option("--jobs,-j", jobs, "worker threads (env LAPSIM_JOBS, default: all cores)");

  CLI::App* one = app.add_subcommand("degrade-one", "Degrade a single image");
  one->add_option("--config,-c", config_path, "JSON config file");
  one->add_option("--input,-i", input_path, "clean PNG image")->required();
  one->add_option("--output,-o", output_path, "output directory")->required();
  one->add_option("--seed", seed, "override master_seed");

  CLI::App* pre = app.add_subcommand("precorrect", "Pre-correct a synthesized dataset");
  pre->add_option("--input,-i", manifest_path, "dataset manifest.json")->required();
  pre->add_option("--output,-o", output_path, "output directory")->required();
  pre->add_option("--bound", bound, "override measurement error bound");
  pre->add_option("--seed", seed, "override measurement seed");
  pre->add_option("--margin", precorrect_margin, "metric margin in pixels (default 16)");
  pre->add_option("--jobs,-j", jobs, "worker threads");

  CLI::App* eval = app.add_subcommand("eval", "Score degraded or pre-corrected images");
  eval->add_option("--input,-i", manifest_path, "manifest.json")->required();
  eval->add_option("--variant", variant, "degraded|precorrected (default degraded)")
      ->check(CLI::IsMember({"degraded", "precorrected"}));
  eval->add_option("--output,-o", output_path, "report path prefix")->required();
  eval->add_option("--margin", margin, "interior margin in pixels (default 0)");
  eval->add_option("--jobs,-j", jobs, "worker threads");

  CLI::App* viz = app.add_subcommand("flow-viz", "Color-wheel rendering of a jitter sidecar");
  viz->add_option("--input,-i", input_path, "sidecar .lapj file")->required();
  viz->add_option("--output,-o", output_path, "output PNG")->required();
  viz->add_option("--height", viz_height, "override field height");

  CLI::App* plot = app.add_subcommand("curve-plot", "Plot ideal/CDSM/noisy jitter curves");
  plot->add_option("--input,-i", input_path, "sidecar .lapj file")->required();
  plot->add_option("--output,-o", output_path, "output path prefix (.csv/.png)")->required();
  plot->add_option("--bound", plot_bound, "measurement error bound (default 0.2)");
  plot->add_option("--seed", plot_seed, "measurement error seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (synth->parsed())
      return cmd_synth(config_path, input_path, output_path, seed, jobs);
    if (one->parsed())
      return cmd_degrade_one(config_path, input_path, output_path, seed);
    if (pre->parsed())
      return cmd_precorrect(manifest_path, output_path, bound, seed, precorrect_margin, jobs);
    if (eval->parsed())
      return cmd_eval(manifest_path, variant, output_path, margin, jobs);
    if (viz->parsed())
      return cmd_flow_viz(input_path, output_path, viz_height);
    if (plot->parsed())
      return cmd_curve_plot(input_path, output_path, plot_bound, plot_seed);
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const integrity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIntegrityError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

} // namespace lapsim::cli
