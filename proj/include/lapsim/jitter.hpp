#pragma once

#include <cstdint>
#include <vector>

namespace lapsim {

enum class Direction { roll, pitch };

/// One sinusoidal jitter component. Amplitude is expressed directly in
/// pixels of sensor offset (the focal-length/pixel-size scaling is a
/// separate helper, angle_amplitude_to_pixels).
struct SinusoidComponent {
  double amplitude_px = 0.0; // >= 0
  double frequency_hz = 0.0; // > 0
  double phase_rad = 0.0;    // normalized into [0, 2pi)

  static SinusoidComponent make(double amplitude_px, double frequency_hz,
                                double phase_rad);
};

/// Ordered list of components for one direction. Empty set yields the
/// zero curve.
struct SinusoidSet {
  std::vector<SinusoidComponent> components;
};

/// Optical/sensor geometry needed to convert jitter angles to pixel
/// offsets, plus the line timing parameters.
struct CameraSpec {
  double focal_length = 1.0;    // > 0, same length unit as pixel_size
  double pixel_size = 1.0;      // > 0
  double line_interval_s = 1.0; // tau, > 0
  int subdivision_count = 1;    // M, >= 1
};

/// Per-column pixel offset signal in one direction; sample k (0-based
/// position, 1-based column time index) covers time t = (k+1)*tau.
struct JitterCurve {
  std::vector<double> samples;
  Direction direction = Direction::roll;

  int width() const { return static_cast<int>(samples.size()); }
};

/// Bounded multiplicative gyroscope-style measurement error:
/// noisy(k) = ideal(k) * (1 + u_k), u_k uniform on [-bound, +bound].
struct MeasurementErrorModel {
  double relative_bound = 0.20; // in [0, 1]
  uint64_t seed = 0;
};

/// Converts a jitter angle amplitude (radians) to pixels of sensor offset,
/// angle * focal_length / pixel_size.
double angle_amplitude_to_pixels(double angle_amplitude_rad, const CameraSpec& camera);

/// Samples the subdivision jitter curve at columns k = 1..width:
///   sum_i A'_i sin(2 pi f_i (k tau + (m/M) tau) + phi_i).
/// m = 0 reproduces plain per-line sampling.
JitterCurve sample_ideal_curve(const SinusoidSet& set, int width, double tau,
                               int subdivision_index, int subdivision_count,
                               Direction direction = Direction::roll);

/// Mean of the M subdivision curves (finer-grained CDSM sampling averaged
/// back to one value per column).
JitterCurve cdsm_average(const SinusoidSet& set, int width, double tau,
                         int subdivision_count,
                         Direction direction = Direction::roll);

/// Applies the bounded multiplicative error column-wise. Deterministic for
/// a fixed model seed.
JitterCurve add_measurement_error(const JitterCurve& curve,
                                  const MeasurementErrorModel& model);

/// The M subdivision curves with independent measurement-error draws
/// applied to each (subdivision m = 0 uses the model seed itself, higher
/// ones derived streams).
std::vector<JitterCurve> cdsm_noisy_subdivisions(const SinusoidSet& set,
                                                 const MeasurementErrorModel& model,
                                                 int width, double tau,
                                                 int subdivision_count,
                                                 Direction direction = Direction::roll);

/// Noisy CDSM curve: independent error draws on each of the M subdivision
/// curves, then the average. Averaging shrinks the residual noise by
/// roughly 1/sqrt(M).
JitterCurve cdsm_noisy_curve(const SinusoidSet& set,
                             const MeasurementErrorModel& model, int width,
                             double tau, int subdivision_count,
                             Direction direction = Direction::roll);

} // namespace lapsim
