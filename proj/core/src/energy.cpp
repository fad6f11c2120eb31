#include "wsnsim/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace wsnsim {

void validate(const EnergyParams& p) {
  if (!(p.sleep_power_w > 0.0)) throw std::invalid_argument("energy: sleep_power_w must be positive");
  if (!(p.idle_power_w >= p.sleep_power_w)) {
    throw std::invalid_argument("energy: idle_power_w must be >= sleep_power_w");
  }
  if (!(p.rx_power_w > p.idle_power_w)) {
    throw std::invalid_argument("energy: rx_power_w must exceed idle_power_w");
  }
  if (!(p.tx_power_w > p.rx_power_w)) {
    throw std::invalid_argument("energy: tx_power_w must exceed rx_power_w");
  }
  if (!(p.supply_voltage_v > 0.0)) throw std::invalid_argument("energy: supply_voltage_v must be positive");
  if (!(p.initial_energy_j > 0.0)) throw std::invalid_argument("energy: initial_energy_j must be positive");
}

double power_from_current(double current_a, double voltage_v) { return current_a * voltage_v; }

double packet_tx_time(double size_bytes, double rate_bps) {
  if (!(rate_bps > 0.0)) throw std::domain_error("packet_tx_time: rate must be positive");
  if (size_bytes < 0.0) throw std::domain_error("packet_tx_time: size must be non-negative");
  return size_bytes * 8.0 / rate_bps;
}

double packet_energy(double power_w, double duration_s) { return power_w * duration_s; }

double battery_energy(double voltage_v, double avg_current_a, double hours) {
  // Current last: exact factors first, then a single rounding.
  return voltage_v * (hours * 3600.0) * avg_current_a;
}

const char* to_string(EnergyCategory c) {
  switch (c) {
    case EnergyCategory::tx: return "tx";
    case EnergyCategory::rx: return "rx";
    case EnergyCategory::idle: return "idle";
    case EnergyCategory::sleep: return "sleep";
  }
  return "?";
}

EnergyMeter::EnergyMeter(double initial_j)
    : initial_(initial_j), residual_(initial_j), alive_(initial_j > 0.0) {
  if (!(initial_j > 0.0)) throw std::invalid_argument("EnergyMeter: initial energy must be positive");
}

DebitResult EnergyMeter::debit(double amount_j, EnergyCategory category) {
  if (amount_j < 0.0) throw std::invalid_argument("EnergyMeter::debit: negative amount");
  if (!alive_) return DebitResult::died;
  if (amount_j < residual_) {
    residual_ -= amount_j;
    consumed_[static_cast<std::size_t>(category)] += amount_j;
    return DebitResult::alive;
  }
  consumed_[static_cast<std::size_t>(category)] += residual_;
  residual_ = 0.0;
  alive_ = false;
  return DebitResult::died;
}

IdleOutcome EnergyMeter::accrue_idle(double elapsed_s, const EnergyParams& params) {
  if (elapsed_s < 0.0) throw std::invalid_argument("EnergyMeter::accrue_idle: negative interval");
  if (!alive_) return {DebitResult::died, 0.0};
  if (elapsed_s == 0.0) return {};
  const double before = residual_;
  const DebitResult r = debit(params.idle_power_w * elapsed_s, EnergyCategory::idle);
  if (r == DebitResult::died) return {r, before / params.idle_power_w};
  return {};
}

double EnergyMeter::consumed_total() const {
  double s = 0.0;
  for (double c : consumed_) s += c;
  return s;
}

double EnergyMeter::conservation_error() const {
  if (initial_ == 0.0) return 0.0;
  return std::abs(initial_ - residual_ - consumed_total()) / initial_;
}

}  // namespace wsnsim
