#include "lapsim/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>

#include <json.hpp>

#include "lapsim/io.hpp"
#include "lapsim/parallel.hpp"
#include "lapsim/rng.hpp"

namespace fs = std::filesystem;

namespace lapsim {

namespace {

using ojson = nlohmann::ordered_json;

// Stream tags under the per-image seed.
constexpr uint64_t kStreamVibration = 1;
constexpr uint64_t kStreamPhases = 2;
constexpr uint64_t kStreamNoise = 3;

// ---------------------------------------------------------------------------
// JSON helpers

[[noreturn]] void bad_config(const std::string& message) {
  throw config_error("config error: " + message);
}

void check_keys(const ojson& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      bad_config("unknown key '" + item.key() + "' in " + context);
  }
}

template <typename T>
T get_field(const ojson& j, const char* key, T fallback, const std::string& context) {
  if (!j.contains(key))
    return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    bad_config(std::string("bad value for '") + key + "' in " + context);
  }
}

ojson sinusoid_set_to_json(const SinusoidSet& set) {
  ojson arr = ojson::array();
  for (const SinusoidComponent& c : set.components) {
    ojson item;
    item["amplitude_px"] = c.amplitude_px;
    item["frequency_hz"] = c.frequency_hz;
    item["phase_rad"] = c.phase_rad;
    arr.push_back(std::move(item));
  }
  return arr;
}

SinusoidSet sinusoid_set_from_json(const ojson& arr, const std::string& context) {
  if (!arr.is_array())
    bad_config(context + " must be an array of components");
  SinusoidSet set;
  for (const ojson& item : arr) {
    if (!item.is_object())
      bad_config(context + " entries must be objects");
    check_keys(item, {"amplitude_px", "frequency_hz", "phase_rad"}, context);
    const double amp = get_field<double>(item, "amplitude_px", 0.0, context);
    const double freq = get_field<double>(item, "frequency_hz", 0.0, context);
    const double phase = get_field<double>(item, "phase_rad", 0.0, context);
    try {
      set.components.push_back(SinusoidComponent::make(amp, freq, phase));
    } catch (const std::exception& e) {
      bad_config(context + ": " + e.what());
    }
  }
  return set;
}

std::string boundary_to_string(BoundaryPolicy b) {
  return b == BoundaryPolicy::zero_fill ? "zero_fill" : "clamp_edge";
}

BoundaryPolicy boundary_from_string(const std::string& s, const std::string& context) {
  if (s == "zero_fill")
    return BoundaryPolicy::zero_fill;
  if (s == "clamp_edge")
    return BoundaryPolicy::clamp_edge;
  bad_config(context + ": boundary must be 'zero_fill' or 'clamp_edge'");
}

ojson config_to_json(const DegradationConfig& cfg) {
  ojson j;
  j["roll_sinusoids"] = sinusoid_set_to_json(cfg.roll_sinusoids);
  j["pitch_sinusoids"] = sinusoid_set_to_json(cfg.pitch_sinusoids);
  j["tau_s"] = cfg.tau_s;
  j["M"] = cfg.M;
  j["gamma"] = ojson{{"gamma", cfg.gamma.gamma}};
  j["noise"] = ojson{{"sigma_gauss", cfg.noise.sigma_gauss},
                     {"lambda_poisson", cfg.noise.lambda_poisson},
                     {"seed", cfg.noise.seed}};
  j["measurement"] = ojson{{"relative_bound", cfg.measurement.relative_bound},
                           {"seed", cfg.measurement.seed}};
  j["amp_vibration"] = ojson{{"mean", cfg.amp_vibration.mean}, {"std", cfg.amp_vibration.std}};
  j["freq_vibration"] =
      ojson{{"mean", cfg.freq_vibration.mean}, {"std", cfg.freq_vibration.std}};
  j["crop"] = ojson{{"width", cfg.crop.width}, {"height", cfg.crop.height}};
  j["master_seed"] = cfg.master_seed;
  j["degrade_boundary"] = boundary_to_string(cfg.degrade_boundary);
  j["precorrect_boundary"] = boundary_to_string(cfg.precorrect_boundary);
  return j;
}

DegradationConfig config_from_json(const ojson& j) {
  if (!j.is_object())
    bad_config("top-level document must be an object");
  check_keys(j,
             {"roll_sinusoids", "pitch_sinusoids", "tau_s", "M", "gamma", "noise",
              "measurement", "amp_vibration", "freq_vibration", "crop",
              "master_seed", "degrade_boundary", "precorrect_boundary"},
             "config");

  DegradationConfig cfg = DegradationConfig::defaults();
  if (j.contains("roll_sinusoids"))
    cfg.roll_sinusoids = sinusoid_set_from_json(j.at("roll_sinusoids"), "roll_sinusoids");
  if (j.contains("pitch_sinusoids"))
    cfg.pitch_sinusoids =
        sinusoid_set_from_json(j.at("pitch_sinusoids"), "pitch_sinusoids");
  cfg.tau_s = get_field<double>(j, "tau_s", cfg.tau_s, "config");
  cfg.M = get_field<int>(j, "M", cfg.M, "config");
  if (j.contains("gamma")) {
    const ojson& g = j.at("gamma");
    check_keys(g, {"gamma"}, "gamma");
    cfg.gamma.gamma = get_field<double>(g, "gamma", cfg.gamma.gamma, "gamma");
  }
  if (j.contains("noise")) {
    const ojson& n = j.at("noise");
    check_keys(n, {"sigma_gauss", "lambda_poisson", "seed"}, "noise");
    cfg.noise.sigma_gauss = get_field<double>(n, "sigma_gauss", cfg.noise.sigma_gauss, "noise");
    cfg.noise.lambda_poisson =
        get_field<double>(n, "lambda_poisson", cfg.noise.lambda_poisson, "noise");
    cfg.noise.seed = get_field<uint64_t>(n, "seed", cfg.noise.seed, "noise");
  }
  if (j.contains("measurement")) {
    const ojson& m = j.at("measurement");
    check_keys(m, {"relative_bound", "seed"}, "measurement");
    cfg.measurement.relative_bound =
        get_field<double>(m, "relative_bound", cfg.measurement.relative_bound, "measurement");
    cfg.measurement.seed = get_field<uint64_t>(m, "seed", cfg.measurement.seed, "measurement");
  }
  if (j.contains("amp_vibration")) {
    const ojson& v = j.at("amp_vibration");
    check_keys(v, {"mean", "std"}, "amp_vibration");
    cfg.amp_vibration.mean = get_field<double>(v, "mean", cfg.amp_vibration.mean, "amp_vibration");
    cfg.amp_vibration.std = get_field<double>(v, "std", cfg.amp_vibration.std, "amp_vibration");
  }
  if (j.contains("freq_vibration")) {
    const ojson& v = j.at("freq_vibration");
    check_keys(v, {"mean", "std"}, "freq_vibration");
    cfg.freq_vibration.mean =
        get_field<double>(v, "mean", cfg.freq_vibration.mean, "freq_vibration");
    cfg.freq_vibration.std = get_field<double>(v, "std", cfg.freq_vibration.std, "freq_vibration");
  }
  if (j.contains("crop")) {
    const ojson& c = j.at("crop");
    check_keys(c, {"width", "height"}, "crop");
    cfg.crop.width = get_field<int>(c, "width", cfg.crop.width, "crop");
    cfg.crop.height = get_field<int>(c, "height", cfg.crop.height, "crop");
  }
  cfg.master_seed = get_field<uint64_t>(j, "master_seed", cfg.master_seed, "config");
  if (j.contains("degrade_boundary"))
    cfg.degrade_boundary = boundary_from_string(
        get_field<std::string>(j, "degrade_boundary", "", "config"), "degrade_boundary");
  if (j.contains("precorrect_boundary"))
    cfg.precorrect_boundary =
        boundary_from_string(get_field<std::string>(j, "precorrect_boundary", "", "config"),
                             "precorrect_boundary");

  // Range validation.
  if (!(cfg.tau_s > 0.0))
    bad_config("tau_s must be > 0");
  if (cfg.M < 1)
    bad_config("M must be >= 1");
  if (!(cfg.gamma.gamma > 0.0))
    bad_config("gamma must be > 0");
  if (cfg.noise.sigma_gauss < 0.0 || cfg.noise.lambda_poisson < 0.0)
    bad_config("noise parameters must be >= 0");
  if (cfg.measurement.relative_bound < 0.0 || cfg.measurement.relative_bound > 1.0)
    bad_config("measurement.relative_bound must be in [0,1]");
  if (cfg.amp_vibration.std < 0.0 || cfg.freq_vibration.std < 0.0)
    bad_config("vibration stds must be >= 0");
  if (cfg.crop.width < 1 || cfg.crop.height < 1)
    bad_config("crop dimensions must be >= 1");
  return cfg;
}

std::string format_double(double v) {
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ojson metric_report_to_json(const MetricReport& m) {
  ojson j;
  if (std::isinf(m.psnr_db))
    j["psnr_db"] = "inf";
  else
    j["psnr_db"] = m.psnr_db;
  j["ssim"] = m.ssim;
  j["gmsd"] = m.gmsd;
  j["spectral_l1"] = m.spectral_l1;
  j["region"] = ojson{{"x", m.region.x},
                      {"y", m.region.y},
                      {"width", m.region.width},
                      {"height", m.region.height}};
  return j;
}

MetricReport metric_report_from_json(const ojson& j) {
  MetricReport m;
  if (j.at("psnr_db").is_string())
    m.psnr_db = std::numeric_limits<double>::infinity();
  else
    m.psnr_db = j.at("psnr_db").get<double>();
  m.ssim = j.at("ssim").get<double>();
  m.gmsd = j.at("gmsd").get<double>();
  m.spectral_l1 = j.at("spectral_l1").get<double>();
  const ojson& r = j.at("region");
  m.region = Rect{r.at("x").get<int>(), r.at("y").get<int>(),
                  r.at("width").get<int>(), r.at("height").get<int>()};
  return m;
}

std::string relativize(const std::string& path, const fs::path& base) {
  std::error_code ec;
  const fs::path rel = fs::relative(fs::absolute(path), base, ec);
  if (ec || rel.empty())
    return fs::absolute(path).generic_string();
  return rel.generic_string();
}

std::string resolve(const std::string& stored, const fs::path& base) {
  const fs::path p(stored);
  if (p.is_absolute())
    return p.lexically_normal().string();
  return (base / p).lexically_normal().string();
}

int line_of_byte(const std::string& text, size_t byte, int& column) {
  int line = 1;
  size_t line_start = 0;
  const size_t limit = std::min(byte, text.size());
  for (size_t i = 0; i < limit; ++i)
    if (text[i] == '\n') {
      ++line;
      line_start = i + 1;
    }
  column = static_cast<int>(limit - line_start) + 1;
  return line;
}

} // namespace

// ---------------------------------------------------------------------------
// Config

DegradationConfig DegradationConfig::defaults() {
  DegradationConfig cfg;
  const double freqs[4] = {1000.0, 2000.0, 3000.0, 4000.0};
  const double roll_amps[4] = {4.0, 1.5, 1.0, 0.5};
  const double pitch_amps[4] = {1.0, 0.5, 0.3, 0.2};
  for (int i = 0; i < 4; ++i) {
    cfg.roll_sinusoids.components.push_back(
        SinusoidComponent::make(roll_amps[i], freqs[i], 0.0));
    cfg.pitch_sinusoids.components.push_back(
        SinusoidComponent::make(pitch_amps[i], freqs[i], 0.0));
  }
  return cfg;
}

DegradationConfig parse_config_text(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int column = 0;
    const int line = line_of_byte(text, e.byte > 0 ? e.byte - 1 : 0, column);
    throw config_error("config parse error at line " + std::to_string(line) +
                       ", column " + std::to_string(column) + ": " + e.what());
  }
  return config_from_json(j);
}

DegradationConfig load_config(const std::string& path) {
  std::vector<uint8_t> bytes;
  try {
    bytes = read_file_bytes(path);
  } catch (const input_error& e) {
    throw config_error(std::string("cannot read config: ") + e.what());
  }
  return parse_config_text(std::string(bytes.begin(), bytes.end()));
}

std::string config_to_text(const DegradationConfig& cfg) {
  return config_to_json(cfg).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Parameter sampling

PerImageParams sample_per_image_params(const DegradationConfig& cfg,
                                       uint64_t image_index) {
  if (cfg.amp_vibration.std < 0.0 || cfg.freq_vibration.std < 0.0)
    throw std::invalid_argument("sample_per_image_params: vibration stds must be >= 0");

  PerImageParams out;
  out.seed = mix_seed(cfg.master_seed, image_index);

  // One amplitude factor and one frequency factor per image, shared by all
  // components of both directions.
  Rng factors(mix_seed(out.seed, kStreamVibration));
  double amp_factor;
  for (;;) {
    amp_factor = factors.gaussian(cfg.amp_vibration.mean, cfg.amp_vibration.std);
    if (amp_factor >= 0.0)
      break;
    ++out.rejected_draws;
  }
  double freq_factor;
  for (;;) {
    freq_factor = factors.gaussian(cfg.freq_vibration.mean, cfg.freq_vibration.std);
    if (freq_factor > 0.0)
      break;
    ++out.rejected_draws;
  }

  Rng phases(mix_seed(out.seed, kStreamPhases));
  auto vibrate = [&](const SinusoidSet& base) {
    SinusoidSet set;
    for (const SinusoidComponent& c : base.components)
      set.components.push_back(SinusoidComponent::make(
          c.amplitude_px * amp_factor, c.frequency_hz * freq_factor,
          phases.uniform(0.0, 2.0 * M_PI)));
    return set;
  };
  out.roll = vibrate(cfg.roll_sinusoids);
  out.pitch = vibrate(cfg.pitch_sinusoids);
  return out;
}

// ---------------------------------------------------------------------------
// Single-frame degradation

DegradeResult degrade_one(const Image& clean, const SinusoidSet& roll,
                          const SinusoidSet& pitch, const DegradationConfig& cfg) {
  if (cfg.M < 1)
    throw std::invalid_argument("degrade_one: M must be >= 1");

  const int h = clean.height();
  const int w = clean.width();
  const Image energy = inverse_gamma(clean, cfg.gamma);

  std::vector<FlowField> maps;
  maps.reserve(cfg.M);
  for (int m = 0; m < cfg.M; ++m)
    maps.push_back(build_jitter_map(
        sample_ideal_curve(roll, w, cfg.tau_s, m, cfg.M, Direction::roll),
        sample_ideal_curve(pitch, w, cfg.tau_s, m, cfg.M, Direction::pitch), h));

  const Image deformed = deform_multi_subdivision(energy, maps, cfg.degrade_boundary);
  const Image noisy = add_sensor_noise(deformed, cfg.noise);
  Image degraded = forward_gamma(clamp01(noisy), cfg.gamma);
  return DegradeResult{std::move(degraded), std::move(maps)};
}

// ---------------------------------------------------------------------------
// Manifest

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
  const fs::path base = fs::absolute(path).parent_path();
  ojson j;
  j["format"] = "lapsim-dataset-manifest";
  j["version"] = manifest.version;
  j["config"] = config_to_json(manifest.config);
  ojson entries = ojson::array();
  for (const ManifestEntry& e : manifest.entries) {
    ojson je;
    je["index"] = e.index;
    je["source"] = e.source;
    je["crop_x"] = e.crop_x;
    je["crop_y"] = e.crop_y;
    je["seed"] = e.seed;
    je["split"] = e.split;
    je["rejected_draws"] = e.rejected_draws;
    je["roll_sinusoids"] = sinusoid_set_to_json(e.roll_sinusoids);
    je["pitch_sinusoids"] = sinusoid_set_to_json(e.pitch_sinusoids);
    je["clean_path"] = relativize(e.clean_path, base);
    je["degraded_path"] = relativize(e.degraded_path, base);
    je["sidecar_path"] = relativize(e.sidecar_path, base);
    je["clean_sha256"] = e.clean_sha256;
    je["degraded_sha256"] = e.degraded_sha256;
    je["sidecar_sha256"] = e.sidecar_sha256;
    if (!e.precorrected_path.empty()) {
      je["precorrected_path"] = relativize(e.precorrected_path, base);
      je["precorrected_sha256"] = e.precorrected_sha256;
    }
    if (!e.status.empty())
      je["status"] = e.status;
    if (e.has_metrics) {
      je["metrics_degraded"] = metric_report_to_json(e.metrics_degraded);
      je["metrics_precorrected"] = metric_report_to_json(e.metrics_precorrected);
    }
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  const std::string text = j.dump(2) + "\n";
  write_file_bytes(path, text.data(), text.size());
}

DatasetManifest load_manifest(const std::string& path) {
  const std::vector<uint8_t> bytes = read_file_bytes(path);
  const fs::path base = fs::absolute(path).parent_path();
  ojson j;
  try {
    j = ojson::parse(std::string(bytes.begin(), bytes.end()));
  } catch (const nlohmann::json::parse_error& e) {
    throw integrity_error("manifest parse error in '" + path + "': " + e.what());
  }

  try {
    if (j.at("format").get<std::string>() != "lapsim-dataset-manifest")
      throw integrity_error("'" + path + "' is not a dataset manifest");
    DatasetManifest manifest;
    manifest.version = j.at("version").get<int>();
    manifest.config = config_from_json(j.at("config"));
    for (const ojson& je : j.at("entries")) {
      ManifestEntry e;
      e.index = je.at("index").get<uint64_t>();
      e.source = je.at("source").get<std::string>();
      e.crop_x = je.at("crop_x").get<int>();
      e.crop_y = je.at("crop_y").get<int>();
      e.seed = je.at("seed").get<uint64_t>();
      e.split = je.at("split").get<std::string>();
      e.rejected_draws = je.at("rejected_draws").get<int>();
      e.roll_sinusoids = sinusoid_set_from_json(je.at("roll_sinusoids"), "roll_sinusoids");
      e.pitch_sinusoids =
          sinusoid_set_from_json(je.at("pitch_sinusoids"), "pitch_sinusoids");
      e.clean_path = resolve(je.at("clean_path").get<std::string>(), base);
      e.degraded_path = resolve(je.at("degraded_path").get<std::string>(), base);
      e.sidecar_path = resolve(je.at("sidecar_path").get<std::string>(), base);
      e.clean_sha256 = je.at("clean_sha256").get<std::string>();
      e.degraded_sha256 = je.at("degraded_sha256").get<std::string>();
      e.sidecar_sha256 = je.at("sidecar_sha256").get<std::string>();
      if (je.contains("precorrected_path")) {
        e.precorrected_path = resolve(je.at("precorrected_path").get<std::string>(), base);
        e.precorrected_sha256 = je.at("precorrected_sha256").get<std::string>();
      }
      if (je.contains("status"))
        e.status = je.at("status").get<std::string>();
      if (je.contains("metrics_degraded")) {
        e.has_metrics = true;
        e.metrics_degraded = metric_report_from_json(je.at("metrics_degraded"));
        e.metrics_precorrected = metric_report_from_json(je.at("metrics_precorrected"));
      }
      manifest.entries.push_back(std::move(e));
    }
    return manifest;
  } catch (const nlohmann::json::exception& e) {
    throw integrity_error("malformed manifest '" + path + "': " + e.what());
  } catch (const config_error& e) {
    throw integrity_error("malformed manifest '" + path + "': " + e.what());
  }
}

std::string split_tag(const std::string& source_name, int crop_x, int crop_y) {
  const std::string key =
      source_name + ":" + std::to_string(crop_x) + "," + std::to_string(crop_y);
  const std::string hex = sha256_hex(key);
  uint64_t v = 0;
  for (int i = 0; i < 16; ++i) {
    const char c = hex[i];
    v = (v << 4) | static_cast<uint64_t>(c <= '9' ? c - '0' : c - 'a' + 10);
  }
  return (v % 9) < 8 ? "train" : "test";
}

// ---------------------------------------------------------------------------
// Dataset synthesis

namespace {

struct CropTask {
  std::string source_path;
  std::string source_name;
  int crop_x = 0;
  int crop_y = 0;
  uint64_t index = 0;
};

std::string pair_stem(uint64_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(index));
  return buf;
}

class Logger {
public:
  explicit Logger(std::ostream* out) : out_(out) {}
  void line(const std::string& text) {
    if (!out_)
      return;
    std::lock_guard<std::mutex> lock(mutex_);
    *out_ << text << "\n";
  }

private:
  std::ostream* out_;
  std::mutex mutex_;
};

} // namespace

DatasetManifest synthesize_dataset(const std::string& input_dir,
                                   const std::string& output_dir,
                                   const DegradationConfig& cfg, int jobs,
                                   std::ostream* log) {
  Logger logger(log);
  const fs::path in(input_dir);
  if (!fs::is_directory(in))
    throw input_error("input directory '" + input_dir + "' does not exist");

  std::vector<std::string> sources;
  for (const fs::directory_entry& de : fs::directory_iterator(in)) {
    if (!de.is_regular_file())
      continue;
    std::string ext = de.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png")
      sources.push_back(de.path().filename().string());
  }
  std::sort(sources.begin(), sources.end());

  std::vector<CropTask> tasks;
  uint64_t index = 0;
  for (const std::string& name : sources) {
    const std::string path = (in / name).string();
    int h = 0, w = 0;
    try {
      read_png_size(path, h, w);
    } catch (const std::exception& e) {
      logger.line(std::string("[synth] warning: skipping '") + name + "': " + e.what());
      continue;
    }
    const int nx = w / cfg.crop.width;
    const int ny = h / cfg.crop.height;
    for (int ry = 0; ry < ny; ++ry)
      for (int rx = 0; rx < nx; ++rx)
        tasks.push_back(CropTask{path, name, rx * cfg.crop.width, ry * cfg.crop.height,
                                 index++});
  }
  if (tasks.empty())
    throw input_error("no usable crops in '" + input_dir + "'");

  const fs::path out(output_dir);
  fs::create_directories(out / "clean");
  fs::create_directories(out / "degraded");
  fs::create_directories(out / "sidecars");

  std::vector<std::optional<ManifestEntry>> results(tasks.size());
  run_parallel(tasks.size(), jobs, [&](size_t i) {
    const CropTask& task = tasks[i];
    Image source;
    try {
      source = read_image_gray(task.source_path);
    } catch (const std::exception& e) {
      logger.line(std::string("[synth] warning: skipping crop of '") + task.source_name +
                  "': " + e.what());
      return;
    }
    const Image clean =
        source.crop(task.crop_y, task.crop_x, cfg.crop.height, cfg.crop.width);

    const PerImageParams params = sample_per_image_params(cfg, task.index);
    DegradationConfig local = cfg;
    local.noise.seed = mix_seed(params.seed, kStreamNoise);
    const DegradeResult result = degrade_one(clean, params.roll, params.pitch, local);

    const std::string stem = pair_stem(task.index);
    ManifestEntry e;
    e.index = task.index;
    e.source = task.source_name;
    e.crop_x = task.crop_x;
    e.crop_y = task.crop_y;
    e.seed = params.seed;
    e.split = split_tag(task.source_name, task.crop_x, task.crop_y);
    e.rejected_draws = params.rejected_draws;
    e.roll_sinusoids = params.roll;
    e.pitch_sinusoids = params.pitch;
    e.clean_path = (out / "clean" / (stem + ".png")).string();
    e.degraded_path = (out / "degraded" / (stem + ".png")).string();
    e.sidecar_path = (out / "sidecars" / (stem + ".lapj")).string();

    write_png_gray16(e.clean_path, clean);
    write_png_gray16(e.degraded_path, result.degraded);

    Sidecar sc;
    sc.width = static_cast<uint32_t>(cfg.crop.width);
    sc.height = static_cast<uint32_t>(cfg.crop.height);
    for (int m = 0; m < cfg.M; ++m) {
      const JitterCurve roll =
          sample_ideal_curve(params.roll, cfg.crop.width, cfg.tau_s, m, cfg.M, Direction::roll);
      const JitterCurve pitch = sample_ideal_curve(params.pitch, cfg.crop.width, cfg.tau_s,
                                                   m, cfg.M, Direction::pitch);
      sc.records.push_back(
          SidecarRecord{Direction::roll, static_cast<uint32_t>(m), roll.samples});
      sc.records.push_back(
          SidecarRecord{Direction::pitch, static_cast<uint32_t>(m), pitch.samples});
    }
    write_sidecar(e.sidecar_path, sc);

    e.clean_sha256 = sha256_file_hex(e.clean_path);
    e.degraded_sha256 = sha256_file_hex(e.degraded_path);
    e.sidecar_sha256 = sha256_file_hex(e.sidecar_path);
    results[i] = std::move(e);
  });

  DatasetManifest manifest;
  manifest.config = cfg;
  for (std::optional<ManifestEntry>& r : results)
    if (r)
      manifest.entries.push_back(std::move(*r));
  if (manifest.entries.empty())
    throw input_error("no usable crops in '" + input_dir + "'");

  save_manifest(manifest, (out / "manifest.json").string());
  logger.line("[synth] wrote " + std::to_string(manifest.entries.size()) + " pairs to '" +
              output_dir + "'");
  return manifest;
}

// ---------------------------------------------------------------------------
// Batch pre-correction

PrecorrectResult precorrect_dataset(const DatasetManifest& source,
                                    const MeasurementErrorModel& measurement,
                                    const std::string& output_dir, int margin,
                                    int jobs, std::ostream* log) {
  Logger logger(log);
  const DegradationConfig& cfg = source.config;
  const fs::path out(output_dir);
  fs::create_directories(out / "precorrected");

  PrecorrectResult result;
  result.manifest.version = source.version;
  result.manifest.config = cfg;
  result.manifest.entries = source.entries;

  std::atomic<size_t> failed{0};
  run_parallel(result.manifest.entries.size(), jobs, [&](size_t i) {
    ManifestEntry& e = result.manifest.entries[i];
    try {
      if (sha256_file_hex(e.clean_path) != e.clean_sha256 ||
          sha256_file_hex(e.degraded_path) != e.degraded_sha256 ||
          sha256_file_hex(e.sidecar_path) != e.sidecar_sha256)
        throw integrity_error("checksum_mismatch");

      const Image clean = read_image_gray(e.clean_path);
      const Image degraded = read_image_gray(e.degraded_path);
      const int w = degraded.width();
      const int h = degraded.height();

      MeasurementErrorModel roll_model = measurement;
      roll_model.seed = mix_seed(measurement.seed, e.index, 0);
      MeasurementErrorModel pitch_model = measurement;
      pitch_model.seed = mix_seed(measurement.seed, e.index, 1);

      const std::vector<JitterCurve> noisy_roll = cdsm_noisy_subdivisions(
          e.roll_sinusoids, roll_model, w, cfg.tau_s, cfg.M, Direction::roll);
      const std::vector<JitterCurve> noisy_pitch = cdsm_noisy_subdivisions(
          e.pitch_sinusoids, pitch_model, w, cfg.tau_s, cfg.M, Direction::pitch);

      std::vector<FlowField> noisy_maps;
      noisy_maps.reserve(cfg.M);
      for (int m = 0; m < cfg.M; ++m)
        noisy_maps.push_back(build_jitter_map(noisy_roll[m], noisy_pitch[m], h));

      const Image warped = precorrect(degraded, noisy_maps, cfg.precorrect_boundary);
      const Image stored = quantize(warped, 16);

      e.precorrected_path =
          (out / "precorrected" / (pair_stem(e.index) + ".png")).string();
      write_png_gray16(e.precorrected_path, stored);
      e.precorrected_sha256 = sha256_file_hex(e.precorrected_path);

      e.metrics_degraded = evaluate_pair(clean, degraded, margin);
      e.metrics_precorrected = evaluate_pair(clean, stored, margin);
      e.has_metrics = true;
      e.status = "ok";
    } catch (const integrity_error&) {
      e.status = "checksum_mismatch";
      failed.fetch_add(1);
      logger.line("[precorrect] entry " + std::to_string(e.index) + ": checksum mismatch");
    } catch (const std::exception& ex) {
      e.status = std::string("error: ") + ex.what();
      failed.fetch_add(1);
      logger.line("[precorrect] entry " + std::to_string(e.index) + " failed: " + ex.what());
    }
  });
  result.failed_entries = failed.load();

  save_manifest(result.manifest, (out / "manifest.json").string());

  // One CSV row per evaluated pair.
  std::string csv =
      "index,status,psnr_degraded_db,ssim_degraded,gmsd_degraded,spectral_l1_degraded,"
      "psnr_precorrected_db,ssim_precorrected,gmsd_precorrected,spectral_l1_precorrected,"
      "margin\n";
  for (const ManifestEntry& e : result.manifest.entries) {
    csv += std::to_string(e.index) + "," + (e.status.empty() ? "ok" : e.status);
    if (e.has_metrics) {
      const MetricReport& d = e.metrics_degraded;
      const MetricReport& p = e.metrics_precorrected;
      csv += "," + format_double(d.psnr_db) + "," + format_double(d.ssim) + "," +
             format_double(d.gmsd) + "," + format_double(d.spectral_l1) + "," +
             format_double(p.psnr_db) + "," + format_double(p.ssim) + "," +
             format_double(p.gmsd) + "," + format_double(p.spectral_l1) + "," +
             std::to_string(margin);
    } else {
      csv += ",,,,,,,,,";
    }
    csv += "\n";
  }
  write_file_bytes((out / "metrics.csv").string(), csv.data(), csv.size());

  logger.line("[precorrect] processed " + std::to_string(result.manifest.entries.size()) +
              " entries, " + std::to_string(result.failed_entries) + " failed");
  return result;
}

} // namespace lapsim
