#include <gtest/gtest.h>

#include "wsnsim/energy.hpp"

using namespace wsnsim;

TEST(Power, FromCurrent) {
  EXPECT_NEAR(power_from_current(33e-3, 3.0), 0.099, 1e-15);
  EXPECT_NEAR(power_from_current(14e-3, 3.0), 0.042, 1e-15);
  EXPECT_NEAR(power_from_current(1e-6, 3.0), 3e-6, 1e-18);
}

TEST(PacketSpec, DataFrameIs84Bytes) {
  PacketSpec s;
  EXPECT_EQ(s.data_size(), 84);
  EXPECT_EQ(s.control_size(), 102);
}

TEST(PacketTime, Values) {
  EXPECT_EQ(packet_tx_time(84, 76800), 0.00875);
  EXPECT_EQ(packet_tx_time(0, 76800), 0.0);
  EXPECT_EQ(packet_tx_time(42, 76800), 0.004375);
  EXPECT_THROW(packet_tx_time(84, 0), std::domain_error);
}

TEST(PacketEnergy, Values) {
  EXPECT_NEAR(packet_energy(0.099, 0.00875), 8.6625e-4, 1e-12);
  EXPECT_NEAR(packet_energy(0.042, 0.00875), 3.675e-4, 1e-12);
  EXPECT_EQ(packet_energy(0.099, 0.0), 0.0);
  // one forwarded data hop
  EXPECT_NEAR(packet_energy(0.099, 0.00875) + packet_energy(0.042, 0.00875), 1.23375e-3, 1e-12);
}

TEST(Battery, Energy) {
  EXPECT_NEAR((33.0 + 14.0) / 2.0, 23.5, 0.0);
  EXPECT_EQ(battery_energy(3.0, 23.5e-3, 80.0), 20304.0);
  EXPECT_EQ(battery_energy(1.0, 1.0, 1.0), 3600.0);
}

TEST(Meter, DebitAndClamp) {
  EnergyMeter m(1.0);
  EXPECT_EQ(m.debit(0.3, EnergyCategory::tx), DebitResult::alive);
  EXPECT_NEAR(m.residual(), 0.7, 1e-15);
  EXPECT_NEAR(m.consumed(EnergyCategory::tx), 0.3, 1e-15);

  EnergyMeter low(0.2);
  EXPECT_EQ(low.debit(0.5, EnergyCategory::rx), DebitResult::died);
  EXPECT_EQ(low.residual(), 0.0);
  EXPECT_NEAR(low.consumed(EnergyCategory::rx), 0.2, 1e-15);
  EXPECT_FALSE(low.alive());
  EXPECT_EQ(low.debit(0.1, EnergyCategory::tx), DebitResult::died);
  EXPECT_EQ(low.consumed(EnergyCategory::tx), 0.0);
}

TEST(Meter, ForwardingOnePacket) {
  EnergyMeter m(0.2);
  m.debit(packet_energy(0.042, 0.00875), EnergyCategory::rx);
  m.debit(packet_energy(0.099, 0.00875), EnergyCategory::tx);
  EXPECT_NEAR(m.residual(), 0.19876625, 1e-12);
}

TEST(Meter, IdleAccrual) {
  EnergyParams p;
  EnergyMeter m(1.0);
  auto out = m.accrue_idle(100.0, p);
  EXPECT_EQ(out.result, DebitResult::alive);
  EXPECT_NEAR(m.residual(), 0.4, 1e-12);
  const double before = m.residual();
  m.accrue_idle(0.0, p);
  EXPECT_EQ(m.residual(), before);
}

TEST(Meter, IdleDeathIsInterpolated) {
  EnergyParams p;
  EnergyMeter m(0.006);
  const auto out = m.accrue_idle(2.0, p);
  EXPECT_EQ(out.result, DebitResult::died);
  EXPECT_NEAR(out.death_offset_s, 1.0, 1e-12);
  EXPECT_EQ(m.residual(), 0.0);
  EXPECT_NEAR(m.consumed(EnergyCategory::idle), 0.006, 1e-15);
}

TEST(Meter, ConservationUnderRandomDebits) {
  EnergyMeter m(0.75);
  EnergyParams p;
  unsigned state = 12345;
  auto next = [&] {
    state = state * 1103515245u + 12345u;
    return (state >> 8) / double(1 << 24);
  };
  double last = m.residual();
  for (int i = 0; i < 2000 && m.alive(); ++i) {
    const auto cat = static_cast<EnergyCategory>(i % 4);
    if (cat == EnergyCategory::idle) m.accrue_idle(next(), p);
    else m.debit(next() * 1e-3, cat);
    EXPECT_LE(m.residual(), last);
    last = m.residual();
    EXPECT_LE(m.conservation_error(), 1e-12);
  }
  EXPECT_GE(m.residual(), 0.0);
}

TEST(Meter, RejectsBadInput) {
  EXPECT_THROW(EnergyMeter(0.0), std::invalid_argument);
  EnergyMeter m(1.0);
  EXPECT_THROW(m.debit(-1.0, EnergyCategory::tx), std::invalid_argument);
  EXPECT_THROW(m.accrue_idle(-1.0, EnergyParams{}), std::invalid_argument);
}

TEST(EnergyParams, Validation) {
  EXPECT_NO_THROW(validate(EnergyParams{}));
  EnergyParams p;
  p.rx_power_w = 0.2;
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = EnergyParams{};
  p.initial_energy_j = 0.0;
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = EnergyParams{};
  p.idle_power_w = p.sleep_power_w;
  EXPECT_NO_THROW(validate(p));
}
