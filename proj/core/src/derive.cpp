#include "wsnsim/derive.hpp"

#include <cstdio>

namespace wsnsim {

DerivationSheet derive(const SimConfig& cfg) {
  const auto& r = cfg.radio;
  const auto& e = cfg.energy;
  DerivationSheet s;
  s.frequency_hz = r.frequency_hz;
  s.wavelength_m = wavelength(r.frequency_hz);
  s.antenna_height_min_m = quarter_wave_height(r.frequency_hz);
  s.tx_power_w = r.tx_power_w;
  s.tx_power_dbm = watts_to_dbm(r.tx_power_w);
  s.rx_threshold_w = r.rx_threshold_w;
  s.rx_threshold_dbm = watts_to_dbm(r.rx_threshold_w);
  s.max_range_m = max_range(r, r.rx_threshold_w);
  s.decode_range_m = r.decode_range_m;
  s.data_packet_bytes = cfg.packets.data_size();
  s.data_packet_time_s = packet_tx_time(s.data_packet_bytes, r.data_rate_bps);
  s.control_packet_bytes = cfg.packets.control_size();
  s.control_packet_time_s = packet_tx_time(s.control_packet_bytes, r.data_rate_bps);
  s.tx_energy_j = packet_energy(e.tx_power_w, s.data_packet_time_s);
  s.rx_energy_j = packet_energy(e.rx_power_w, s.data_packet_time_s);
  s.hop_energy_j = s.tx_energy_j + s.rx_energy_j;
  s.battery_current_a = cfg.battery.avg_current_a;
  s.battery_hours = cfg.battery.hours;
  s.battery_energy_j = battery_energy(e.supply_voltage_v, cfg.battery.avg_current_a, cfg.battery.hours);
  return s;
}

std::string format(const DerivationSheet& s) {
  std::string out;
  auto row = [&out](const char* name, double v, const char* unit) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-24s %.10g %s\n", name, v, unit);
    out += buf;
  };
  row("frequency", s.frequency_hz, "Hz");
  row("wavelength", s.wavelength_m, "m");
  row("antenna_height_min", s.antenna_height_min_m, "m");
  row("tx_power", s.tx_power_w, "W");
  row("tx_power_dbm", s.tx_power_dbm, "dBm");
  row("rx_threshold", s.rx_threshold_w, "W");
  row("rx_threshold_dbm", s.rx_threshold_dbm, "dBm");
  row("max_range", s.max_range_m, "m");
  row("decode_range", s.decode_range_m, "m");
  row("data_packet_size", s.data_packet_bytes, "bytes");
  row("data_packet_time", s.data_packet_time_s, "s");
  row("control_packet_size", s.control_packet_bytes, "bytes");
  row("control_packet_time", s.control_packet_time_s, "s");
  row("tx_energy_per_packet", s.tx_energy_j, "J");
  row("rx_energy_per_packet", s.rx_energy_j, "J");
  row("energy_per_hop", s.hop_energy_j, "J");
  row("battery_current", s.battery_current_a, "A");
  row("battery_hours", s.battery_hours, "h");
  row("battery_energy", s.battery_energy_j, "J");
  return out;
}

}  // namespace wsnsim
