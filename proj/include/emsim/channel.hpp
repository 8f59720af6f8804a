#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>

#include "emsim/errors.hpp"
#include "emsim/random.hpp"

// Physical-layer math: log-distance path gain, thermal noise, SINR, Shannon
// capacity and energy efficiency. Everything works in linear units; dB
// appears only at configuration boundaries.
namespace emsim::channel {

inline constexpr double speed_of_light_m_per_s = 299792458.0;
inline constexpr double boltzmann_j_per_k = 1.380649e-23;

enum class FadingKind { none, rayleigh };

// Rayleigh fading multiplies a gain by |X|^2 with X a unit complex Gaussian,
// i.e. an Exp(1) draw. `trials` draws are averaged per application, so
// trials=1 is instantaneous fading and large values smooth toward the mean.
struct Fading {
  FadingKind kind = FadingKind::none;
  std::uint32_t trials = 1;
};

struct ChannelModel {
  double path_loss_exponent = 2.0;     // alpha, >= 1
  double carrier_frequency_hz = 700e6;
  double reference_distance_m = 1.0;   // d0 of the log-distance model
  double noise_temperature_k = 290.0;
  double noise_figure_db = 0.0;
  Fading fading{};

  void validate() const {
    if (!(path_loss_exponent >= 1.0)) {
      throw ConfigError("path_loss_exponent >= 1 violated (got " +
                        std::to_string(path_loss_exponent) + ")");
    }
    if (!(carrier_frequency_hz > 0.0)) {
      throw ConfigError("carrier_frequency_hz > 0 violated");
    }
    if (!(reference_distance_m > 0.0)) {
      throw ConfigError("reference_distance_m > 0 violated");
    }
    if (!(noise_temperature_k > 0.0)) {
      throw ConfigError("noise_temperature_k > 0 violated");
    }
    if (!(noise_figure_db >= 0.0)) {
      throw ConfigError("noise_figure_db >= 0 violated");
    }
    if (fading.kind == FadingKind::rayleigh && fading.trials < 1) {
      throw ConfigError("fading.trials >= 1 violated");
    }
  }
};

// One transmitter as seen by the receiver under evaluation: radiated power
// and the linear channel attenuation on the path to that receiver.
struct Transmitter {
  double power_w = 0.0;
  double gain = 1.0;
};

struct LinkMetrics {
  double gain = 0.0;
  double sinr = 0.0;
  double capacity_bps = 0.0;
  double ee_bits_per_joule = 0.0;
};

// Log-distance gain anchored to Friis free space at the reference distance:
//   g(d) = (c / (4 pi f_c d0))^2 * (d / d0)^(-alpha)   for d >= d0,
// clamped to g(d0) below d0 so the function stays total, and capped at 1.
inline double path_gain(const ChannelModel& model, double distance_m) {
  if (!(distance_m > 0.0)) {
    throw std::domain_error("path_gain: distance must be > 0");
  }
  const double d0 = model.reference_distance_m;
  const double lambda = speed_of_light_m_per_s / model.carrier_frequency_hz;
  const double anchor = std::pow(lambda / (4.0 * std::numbers::pi * d0), 2.0);
  const double decay =
      distance_m <= d0
          ? 1.0
          : std::pow(distance_m / d0, -model.path_loss_exponent);
  return std::min(1.0, anchor * decay);
}

// Thermal noise floor k*T*B degraded by the receiver noise figure.
inline double noise_power(const ChannelModel& model, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) {
    throw std::domain_error("noise_power: bandwidth must be > 0");
  }
  return boltzmann_j_per_k * model.noise_temperature_k * bandwidth_hz *
         std::pow(10.0, model.noise_figure_db / 10.0);
}

namespace detail {
inline void check_transmitter(const Transmitter& t, const char* who) {
  if (!(t.power_w >= 0.0) || !std::isfinite(t.power_w)) {
    throw std::domain_error(std::string(who) + ": power must be finite and >= 0");
  }
  if (!(t.gain > 0.0) || !(t.gain <= 1.0)) {
    throw std::domain_error(std::string(who) + ": gain must be in (0, 1]");
  }
}
}  // namespace detail

// SINR at the receiver: p_s h_s / (sum_k p_k h_k + sigma^2), the sum running
// over co-channel interferers only. Equivalent to the sum-minus-self form
// when the signal term is included in the sum.
inline double sinr(const Transmitter& signal,
                   std::span<const Transmitter> interferers, double noise_w) {
  if (noise_w < 0.0 || !std::isfinite(noise_w)) {
    throw std::domain_error("sinr: noise must be finite and >= 0");
  }
  detail::check_transmitter(signal, "sinr signal");
  double denominator = noise_w;
  for (const Transmitter& t : interferers) {
    detail::check_transmitter(t, "sinr interferer");
    denominator += t.power_w * t.gain;
  }
  const double received = signal.power_w * signal.gain;
  if (received == 0.0) return 0.0;
  if (denominator <= 0.0) {
    throw std::domain_error("sinr: zero noise and zero interference");
  }
  return received / denominator;
}

inline double sinr(const Transmitter& signal, double noise_w) {
  return sinr(signal, std::span<const Transmitter>{}, noise_w);
}

// Shannon capacity aggregated over parallel route contributions:
//   C = sum_i B log2(1 + SINR_i).
inline double capacity(double bandwidth_hz, std::span<const double> sinr_values) {
  if (!(bandwidth_hz > 0.0)) {
    throw std::domain_error("capacity: bandwidth must be > 0");
  }
  double total = 0.0;
  for (double s : sinr_values) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw std::domain_error("capacity: sinr must be finite and >= 0");
    }
    total += bandwidth_hz * std::log2(1.0 + s);
  }
  return total;
}

inline double capacity(double bandwidth_hz, std::initializer_list<double> sinr_values) {
  return capacity(bandwidth_hz, std::span<const double>(sinr_values.begin(), sinr_values.size()));
}

// Bits delivered per joule spent: EE = C / (H * p), H the hop count of the
// route and p the maximum transmit power along it.
inline double energy_efficiency(double capacity_bps, int hop_count,
                                double max_tx_power_w) {
  if (hop_count < 1) {
    throw std::domain_error("energy_efficiency: hop_count must be >= 1");
  }
  if (!(max_tx_power_w > 0.0)) {
    throw std::domain_error("energy_efficiency: power must be > 0");
  }
  if (!(capacity_bps >= 0.0) || !std::isfinite(capacity_bps)) {
    throw std::domain_error("energy_efficiency: capacity must be finite and >= 0");
  }
  return capacity_bps / (static_cast<double>(hop_count) * max_tx_power_w);
}

// Applies the configured fading to a gain. FadingKind::none is the identity,
// keeping every default code path deterministic.
inline double apply_fading(double gain, const Fading& fading, rng::Engine& engine) {
  if (fading.kind == FadingKind::none) return gain;
  const std::uint32_t trials = std::max<std::uint32_t>(1, fading.trials);
  double sum = 0.0;
  for (std::uint32_t i = 0; i < trials; ++i) {
    sum += rng::exponential1(engine);
  }
  return gain * (sum / static_cast<double>(trials));
}

}  // namespace emsim::channel
