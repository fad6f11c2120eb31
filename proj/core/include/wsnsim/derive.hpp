#pragma once

#include <string>

#include "wsnsim/simulator.hpp"

namespace wsnsim {

/// Link-budget and energy figures implied by a configuration.
struct DerivationSheet {
  double frequency_hz = 0.0;
  double wavelength_m = 0.0;
  double antenna_height_min_m = 0.0;
  double tx_power_w = 0.0;
  double tx_power_dbm = 0.0;
  double rx_threshold_w = 0.0;
  double rx_threshold_dbm = 0.0;
  double max_range_m = 0.0;
  double decode_range_m = 0.0;
  int data_packet_bytes = 0;
  double data_packet_time_s = 0.0;
  int control_packet_bytes = 0;
  double control_packet_time_s = 0.0;
  double tx_energy_j = 0.0;
  double rx_energy_j = 0.0;
  double hop_energy_j = 0.0;
  double battery_current_a = 0.0;
  double battery_hours = 0.0;
  double battery_energy_j = 0.0;
};

DerivationSheet derive(const SimConfig& cfg);

/// One `name value unit` line per figure.
std::string format(const DerivationSheet& sheet);

}  // namespace wsnsim
