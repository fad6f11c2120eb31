#include "wsnsim/linkbudget.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wsnsim {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("radio: ") + name + " must be positive");
  }
}

}  // namespace

void validate(const RadioParams& p) {
  require_positive(p.frequency_hz, "frequency_hz");
  require_positive(p.tx_power_w, "tx_power_w");
  require_positive(p.rx_threshold_w, "rx_threshold_w");
  require_positive(p.carrier_sense_threshold_w, "carrier_sense_threshold_w");
  require_positive(p.capture_ratio, "capture_ratio");
  require_positive(p.antenna_height_tx_m, "antenna_height_tx_m");
  require_positive(p.antenna_height_rx_m, "antenna_height_rx_m");
  require_positive(p.gain_tx, "gain_tx");
  require_positive(p.gain_rx, "gain_rx");
  require_positive(p.path_loss, "path_loss");
  require_positive(p.data_rate_bps, "data_rate_bps");
  require_positive(p.decode_range_m, "decode_range_m");
  if (p.carrier_sense_threshold_w > p.rx_threshold_w) {
    throw std::invalid_argument("radio: carrier_sense_threshold_w must not exceed rx_threshold_w");
  }
  if (p.capture_ratio < 1.0) {
    throw std::invalid_argument("radio: capture_ratio must be >= 1");
  }
}

double wavelength(double frequency_hz) {
  if (!(frequency_hz > 0.0)) throw std::domain_error("wavelength: frequency must be positive");
  return kSpeedOfLight / frequency_hz;
}

double quarter_wave_height(double frequency_hz) { return wavelength(frequency_hz) / 4.0; }

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

double watts_to_dbm(double watts) {
  if (!(watts > 0.0)) throw std::domain_error("watts_to_dbm: power must be positive");
  return 10.0 * std::log10(watts * 1e3);
}

double two_ray_rx_power(const RadioParams& p, double distance_m) {
  if (!(distance_m > 0.0)) throw std::domain_error("two_ray_rx_power: distance must be positive");
  const double ht2 = p.antenna_height_tx_m * p.antenna_height_tx_m;
  const double hr2 = p.antenna_height_rx_m * p.antenna_height_rx_m;
  const double d2 = distance_m * distance_m;
  return p.tx_power_w * p.gain_tx * p.gain_rx * ht2 * hr2 / (d2 * d2 * p.path_loss);
}

double max_range(const RadioParams& p, double threshold_w) {
  if (!(threshold_w > 0.0)) throw std::domain_error("max_range: threshold must be positive");
  const double ht2 = p.antenna_height_tx_m * p.antenna_height_tx_m;
  const double hr2 = p.antenna_height_rx_m * p.antenna_height_rx_m;
  return std::pow(p.tx_power_w * p.gain_tx * p.gain_rx * ht2 * hr2 / (threshold_w * p.path_loss),
                  0.25);
}

const char* to_string(Reception r) {
  switch (r) {
    case Reception::received: return "received";
    case Reception::captured: return "captured";
    case Reception::collided: return "collided";
    case Reception::below_threshold: return "below_threshold";
  }
  return "?";
}

Reception reception_decision(double rx_power_w, std::span<const double> concurrent_w,
                             const RadioParams& params) {
  if (rx_power_w < params.rx_threshold_w) return Reception::below_threshold;
  double strongest = 0.0;
  bool interfered = false;
  for (double w : concurrent_w) {
    if (w >= params.carrier_sense_threshold_w) {
      interfered = true;
      strongest = std::max(strongest, w);
    }
  }
  if (!interfered) return Reception::received;
  return rx_power_w >= params.capture_ratio * strongest ? Reception::captured : Reception::collided;
}

}  // namespace wsnsim
