#pragma once

#include <span>

namespace wsnsim {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

/// Radio front-end and propagation parameters for the two-ray ground model.
///
/// Power levels are linear watts; `capture_ratio` is a linear power ratio
/// (10 dB is stored as 10). `decode_range_m` is the datasheet hearing range:
/// a frame is only decodable inside it, while carrier sensing and
/// interference extend to wherever the received power meets the thresholds.
struct RadioParams {
  double frequency_hz = 868e6;
  double tx_power_w = 3.1622776601683794e-3;            // 5 dBm
  double rx_threshold_w = 3.9810717055349565e-14;       // -104 dBm
  double carrier_sense_threshold_w = 3.9810717055349565e-14;
  double capture_ratio = 10.0;
  double antenna_height_tx_m = 1.0;
  double antenna_height_rx_m = 1.0;
  double gain_tx = 1.0;
  double gain_rx = 1.0;
  double path_loss = 1.0;
  double data_rate_bps = 76800.0;
  double decode_range_m = 200.0;

  bool operator==(const RadioParams&) const = default;
};

/// Throws std::invalid_argument naming the first violated invariant.
void validate(const RadioParams& params);

double wavelength(double frequency_hz);
double quarter_wave_height(double frequency_hz);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Pr(d) = Pt Gt Gr ht^2 hr^2 / (d^4 L), applied at every distance.
double two_ray_rx_power(const RadioParams& params, double distance_m);

/// Distance at which two_ray_rx_power falls to `threshold_w`.
double max_range(const RadioParams& params, double threshold_w);

enum class Reception { received, captured, collided, below_threshold };

const char* to_string(Reception r);

/// Pairwise capture decision for one frame against every overlapping frame
/// heard at the same receiver. Interferers below the carrier-sense threshold
/// are ignored. Order of `concurrent_w` does not matter.
Reception reception_decision(double rx_power_w, std::span<const double> concurrent_w,
                             const RadioParams& params);

}  // namespace wsnsim
