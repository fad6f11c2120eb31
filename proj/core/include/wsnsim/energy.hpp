#pragma once

#include <array>
#include <cstddef>

namespace wsnsim {

/// Per-state power draw of a sensor node and its battery budget.
struct EnergyParams {
  double tx_power_w = 0.099;
  double rx_power_w = 0.042;
  double idle_power_w = 0.006;
  double sleep_power_w = 3e-6;
  double supply_voltage_v = 3.0;
  double initial_energy_j = 20304.0;

  bool operator==(const EnergyParams&) const = default;
};

/// Requires tx > rx > idle >= sleep > 0 and a positive battery budget.
void validate(const EnergyParams& params);

/// Frame composition in bytes. Control frames replace the data payload with
/// a routing body.
struct PacketSpec {
  int mac_header = 58;
  int ip_header = 10;
  int common_header = 10;
  int data_payload = 6;
  int control_payload = 24;

  int data_size() const { return mac_header + ip_header + common_header + data_payload; }
  int control_size() const { return mac_header + ip_header + common_header + control_payload; }

  bool operator==(const PacketSpec&) const = default;
};

double power_from_current(double current_a, double voltage_v);
double packet_tx_time(double size_bytes, double rate_bps);
double packet_energy(double power_w, double duration_s);
double battery_energy(double voltage_v, double avg_current_a, double hours);

enum class EnergyCategory : std::size_t { tx = 0, rx = 1, idle = 2, sleep = 3 };
inline constexpr std::size_t kEnergyCategories = 4;

const char* to_string(EnergyCategory c);

enum class DebitResult { alive, died };

struct IdleOutcome {
  DebitResult result = DebitResult::alive;
  /// Seconds into the accrued interval at which the battery emptied; only
  /// meaningful when `result == died` on this call.
  double death_offset_s = 0.0;
};

/// Battery of one node. Residual is clamped at zero and every joule drawn is
/// booked against exactly one category, so
/// initial == residual + sum(consumed) holds after every call.
class EnergyMeter {
 public:
  EnergyMeter() = default;
  explicit EnergyMeter(double initial_j);

  /// Draws min(amount, residual). Returns `died` when this call empties the
  /// battery, and on any call against an already dead meter (no-op).
  DebitResult debit(double amount_j, EnergyCategory category);

  IdleOutcome accrue_idle(double elapsed_s, const EnergyParams& params);

  double initial() const { return initial_; }
  double residual() const { return residual_; }
  double consumed(EnergyCategory c) const { return consumed_[static_cast<std::size_t>(c)]; }
  double consumed_total() const;
  bool alive() const { return alive_; }

  /// |initial - residual - consumed| / initial.
  double conservation_error() const;

 private:
  double initial_ = 0.0;
  double residual_ = 0.0;
  std::array<double, kEnergyCategories> consumed_{};
  bool alive_ = false;
};

}  // namespace wsnsim
