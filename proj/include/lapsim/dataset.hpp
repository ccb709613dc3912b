#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lapsim/geometry.hpp"
#include "lapsim/image.hpp"
#include "lapsim/jitter.hpp"
#include "lapsim/metrics.hpp"
#include "lapsim/sensor.hpp"

namespace lapsim {

/// Configuration file problems (parse errors, bad values, unknown keys).
class config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Gaussian multiplier applied per image to enlarge the degradation space.
struct VibrationModel {
  double mean = 1.0;
  double std = 0.1;
};

struct CropSpec {
  int width = 640;
  int height = 480;
};

/// Full degradation recipe. Defaults reproduce the reference four-component
/// setup: f in {1000, 2000, 3000, 4000} Hz paired index-wise with roll
/// amplitudes {4, 1.5, 1.0, 0.5} px and pitch amplitudes {1, 0.5, 0.3, 0.2}
/// px, tau = 3.54e-5 s, M = 6.
struct DegradationConfig {
  SinusoidSet roll_sinusoids;
  SinusoidSet pitch_sinusoids;
  double tau_s = 3.54e-5;
  int M = 6;
  GammaConfig gamma;
  NoiseConfig noise;
  MeasurementErrorModel measurement;
  VibrationModel amp_vibration{1.0, 0.1};
  VibrationModel freq_vibration{1.0, 0.01};
  CropSpec crop{640, 480};
  uint64_t master_seed = 1;
  BoundaryPolicy degrade_boundary = BoundaryPolicy::clamp_edge;
  BoundaryPolicy precorrect_boundary = BoundaryPolicy::zero_fill;

  static DegradationConfig defaults();
};

/// Parses / serializes the JSON config document; field names mirror
/// DegradationConfig. Unknown keys are rejected. Parse failures carry a
/// line:column position in the message.
DegradationConfig parse_config_text(const std::string& text);
DegradationConfig load_config(const std::string& path);
std::string config_to_text(const DegradationConfig& cfg);

/// Per-image randomized parameters: one amplitude factor and one frequency
/// factor per image applied to every component of both directions, plus
/// fresh uniform phases per component.
struct PerImageParams {
  SinusoidSet roll;
  SinusoidSet pitch;
  uint64_t seed = 0;      // per-image stream key, mix of master seed and index
  int rejected_draws = 0; // negative-amplitude factor redraws
};

PerImageParams sample_per_image_params(const DegradationConfig& cfg,
                                       uint64_t image_index);

/// Degradation of one clean frame: inverse gamma, M subdivision warps
/// averaged, sensor noise, forward gamma for storage. The M ideal maps are
/// returned for sidecar storage.
struct DegradeResult {
  Image degraded;
  std::vector<FlowField> ideal_maps;
};

DegradeResult degrade_one(const Image& clean, const SinusoidSet& roll,
                          const SinusoidSet& pitch, const DegradationConfig& cfg);

struct ManifestEntry {
  uint64_t index = 0;
  std::string source; // source image filename (no directory)
  int crop_x = 0;
  int crop_y = 0;
  uint64_t seed = 0;
  std::string split; // "train" or "test", deterministic hash rule
  int rejected_draws = 0;
  SinusoidSet roll_sinusoids;  // resolved post-vibration parameters
  SinusoidSet pitch_sinusoids;
  std::string clean_path; // absolute in memory, relative in the JSON file
  std::string degraded_path;
  std::string sidecar_path;
  std::string clean_sha256;
  std::string degraded_sha256;
  std::string sidecar_sha256;

  // Stage-2 (pre-correction) additions; empty/absent for synth manifests.
  std::string precorrected_path;
  std::string precorrected_sha256;
  std::string status; // "ok" or an error marker such as "checksum_mismatch"
  bool has_metrics = false;
  MetricReport metrics_degraded;
  MetricReport metrics_precorrected;
};

struct DatasetManifest {
  int version = 1;
  DegradationConfig config;
  std::vector<ManifestEntry> entries;
};

/// Manifest JSON with stable key order; entry paths are stored relative to
/// the manifest's directory and resolved to absolute paths on load.
void save_manifest(const DatasetManifest& manifest, const std::string& path);
DatasetManifest load_manifest(const std::string& path);

/// Deterministic 8:1-style split tag from the source name and crop origin.
std::string split_tag(const std::string& source_name, int crop_x, int crop_y);

/// Synthesizes degraded/clean pairs from every readable PNG under
/// input_dir (non-overlapping raster-order crops, partial crops discarded),
/// writes images, sidecars and manifest.json under output_dir, and returns
/// the manifest. jobs <= 0 means one worker per hardware thread.
DatasetManifest synthesize_dataset(const std::string& input_dir,
                                   const std::string& output_dir,
                                   const DegradationConfig& cfg, int jobs = 0,
                                   std::ostream* log = nullptr);

/// Batch pre-correction driven by a manifest: per entry, regenerates the
/// ideal subdivision curves from the stored parameters, applies fresh
/// measurement error per subdivision, warps the degraded image by the
/// negated averaged map, writes the pre-corrected image, and scores both
/// variants against the clean crop. Checksum mismatches mark the entry
/// failed and processing continues.
struct PrecorrectResult {
  DatasetManifest manifest;
  size_t failed_entries = 0;
};

PrecorrectResult precorrect_dataset(const DatasetManifest& source,
                                    const MeasurementErrorModel& measurement,
                                    const std::string& output_dir,
                                    int margin = 16, int jobs = 0,
                                    std::ostream* log = nullptr);

} // namespace lapsim
