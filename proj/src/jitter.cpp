#include "lapsim/jitter.hpp"

#include <cmath>
#include <stdexcept>

#include "lapsim/rng.hpp"

namespace lapsim {

SinusoidComponent SinusoidComponent::make(double amplitude_px, double frequency_hz,
                                          double phase_rad) {
  if (!std::isfinite(amplitude_px) || !std::isfinite(frequency_hz) ||
      !std::isfinite(phase_rad))
    throw std::domain_error("SinusoidComponent: non-finite parameter");
  if (amplitude_px < 0.0)
    throw std::invalid_argument("SinusoidComponent: amplitude_px must be >= 0");
  if (frequency_hz <= 0.0)
    throw std::invalid_argument("SinusoidComponent: frequency_hz must be > 0");
  const double two_pi = 2.0 * M_PI;
  double phase = std::fmod(phase_rad, two_pi);
  if (phase < 0.0)
    phase += two_pi;
  return SinusoidComponent{amplitude_px, frequency_hz, phase};
}

double angle_amplitude_to_pixels(double angle_amplitude_rad, const CameraSpec& camera) {
  if (!std::isfinite(angle_amplitude_rad))
    throw std::domain_error("angle_amplitude_to_pixels: non-finite angle");
  if (camera.focal_length <= 0.0 || camera.pixel_size <= 0.0)
    throw std::invalid_argument("angle_amplitude_to_pixels: camera fields must be positive");
  return angle_amplitude_rad * camera.focal_length / camera.pixel_size;
}

JitterCurve sample_ideal_curve(const SinusoidSet& set, int width, double tau,
                               int subdivision_index, int subdivision_count,
                               Direction direction) {
  if (width < 1)
    throw std::invalid_argument("sample_ideal_curve: width must be >= 1");
  if (tau <= 0.0)
    throw std::invalid_argument("sample_ideal_curve: tau must be > 0");
  if (subdivision_count < 1)
    throw std::invalid_argument("sample_ideal_curve: subdivision_count must be >= 1");
  if (subdivision_index < 0 || subdivision_index >= subdivision_count)
    throw std::invalid_argument("sample_ideal_curve: subdivision index out of range");

  JitterCurve curve;
  curve.direction = direction;
  curve.samples.assign(width, 0.0);

  const double sub_offset =
      (static_cast<double>(subdivision_index) / subdivision_count) * tau;
  for (int k = 0; k < width; ++k) {
    const double t = (k + 1) * tau + sub_offset; // columns are imaged at tau, 2 tau, ...
    double value = 0.0;
    for (const SinusoidComponent& c : set.components)
      value += c.amplitude_px * std::sin(2.0 * M_PI * c.frequency_hz * t + c.phase_rad);
    curve.samples[k] = value;
  }
  return curve;
}

JitterCurve cdsm_average(const SinusoidSet& set, int width, double tau,
                         int subdivision_count, Direction direction) {
  if (subdivision_count < 1)
    throw std::invalid_argument("cdsm_average: subdivision_count must be >= 1");
  if (subdivision_count == 1)
    return sample_ideal_curve(set, width, tau, 0, 1, direction);

  JitterCurve acc = sample_ideal_curve(set, width, tau, 0, subdivision_count, direction);
  for (int m = 1; m < subdivision_count; ++m) {
    const JitterCurve sub =
        sample_ideal_curve(set, width, tau, m, subdivision_count, direction);
    for (int k = 0; k < width; ++k)
      acc.samples[k] += sub.samples[k];
  }
  for (int k = 0; k < width; ++k)
    acc.samples[k] /= subdivision_count;
  return acc;
}

JitterCurve add_measurement_error(const JitterCurve& curve,
                                  const MeasurementErrorModel& model) {
  if (model.relative_bound < 0.0 || model.relative_bound > 1.0)
    throw std::invalid_argument("add_measurement_error: relative_bound must be in [0,1]");

  JitterCurve noisy = curve;
  if (model.relative_bound == 0.0)
    return noisy;
  Rng rng(model.seed);
  for (double& s : noisy.samples)
    s *= 1.0 + rng.uniform(-model.relative_bound, model.relative_bound);
  return noisy;
}

std::vector<JitterCurve> cdsm_noisy_subdivisions(const SinusoidSet& set,
                                                 const MeasurementErrorModel& model,
                                                 int width, double tau,
                                                 int subdivision_count,
                                                 Direction direction) {
  if (subdivision_count < 1)
    throw std::invalid_argument("cdsm_noisy_subdivisions: subdivision_count must be >= 1");

  std::vector<JitterCurve> out;
  out.reserve(subdivision_count);
  for (int m = 0; m < subdivision_count; ++m) {
    const JitterCurve ideal =
        sample_ideal_curve(set, width, tau, m, subdivision_count, direction);
    // m = 0 keeps the model seed so the M = 1 case reduces exactly to
    // add_measurement_error; higher subdivisions draw from derived streams.
    MeasurementErrorModel sub_model = model;
    if (m > 0)
      sub_model.seed = mix_seed(model.seed, static_cast<uint64_t>(m));
    out.push_back(add_measurement_error(ideal, sub_model));
  }
  return out;
}

JitterCurve cdsm_noisy_curve(const SinusoidSet& set,
                             const MeasurementErrorModel& model, int width,
                             double tau, int subdivision_count,
                             Direction direction) {
  const std::vector<JitterCurve> subs =
      cdsm_noisy_subdivisions(set, model, width, tau, subdivision_count, direction);

  JitterCurve acc;
  acc.direction = direction;
  acc.samples.assign(width, 0.0);
  for (const JitterCurve& noisy : subs)
    for (int k = 0; k < width; ++k)
      acc.samples[k] += noisy.samples[k];
  for (int k = 0; k < width; ++k)
    acc.samples[k] /= subdivision_count;
  return acc;
}

} // namespace lapsim
