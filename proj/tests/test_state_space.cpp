#include "mcu/error.hpp"
#include "mcu/state_space.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace mcu;
using namespace mcu::sim;
using boost::multiprecision::cpp_int;

namespace {

/// log10 of an exact integer from its decimal digits: (digits - 1) + log10(leading part).
double big_log10(const cpp_int& v) {
  auto s = v.str();
  auto lead = std::stod("0." + s.substr(0, 17));
  return static_cast<double>(s.size()) + std::log10(lead);
}

} // namespace

TEST(StateSpace, InventoryTermMatchesExactPower) {
  double v = log10_inventory_states(36, 500, 64);
  EXPECT_NEAR(v, 162.19, 0.01);
  cpp_int exact = boost::multiprecision::pow(cpp_int(32000), 36);
  EXPECT_NEAR(v, big_log10(exact), 1e-9);
}

TEST(StateSpace, ProcgenBlockTermMatchesExactPower) {
  double v = log10_block_states(3, 4096);
  EXPECT_NEAR(v, 4096 * std::log10(3.0), 0.01);
  cpp_int exact = boost::multiprecision::pow(cpp_int(3), 4096);
  EXPECT_NEAR(v, big_log10(exact), 1e-9);
}

TEST(StateSpace, WorldVolumeRecomputedWithPrintedFigureKept) {
  WorldDims dims;
  EXPECT_DOUBLE_EQ(dims.volume(), 3.456e17);
  auto est = minecraft_state_space();
  const ReferenceValue* vol = nullptr;
  for (const auto& r : est.references)
    if (r.name == "world_volume") vol = &r;
  ASSERT_NE(vol, nullptr);
  EXPECT_EQ(vol->printed, "3.46e18");
  EXPECT_DOUBLE_EQ(vol->recomputed, 3.456e17);
  EXPECT_NE(std::stod(vol->printed), vol->recomputed);
}

TEST(StateSpace, EstimateIsSumOfTerms) {
  auto p = minecraft_state_space_params();
  auto e = estimate_state_space(p);
  EXPECT_DOUBLE_EQ(e.final_log10, e.block_log10 + e.entity_log10 + e.inventory_log10 + p.constraint_log10);
  EXPECT_NEAR(e.inventory_log10, 162.19, 0.01);
  EXPECT_NEAR(e.block_log10, 3.456e17 * std::log10(500.0), 1e3);
}

TEST(StateSpace, RejectsNonPositiveInputs) {
  EXPECT_THROW(log10_block_states(0, 10), ValidationError);
  EXPECT_THROW(log10_inventory_states(36, -1, 64), ValidationError);
  StateSpaceParams p;
  EXPECT_THROW(estimate_state_space(p), ValidationError);
}
