#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace flexlab;
using namespace flexlab::testing;

namespace {

Framework axes33() {
  return Framework::make(kE, {Point::euclidean(1, 0), Point::euclidean(2, 0), Point::euclidean(3, 0)},
                         {Point::euclidean(0, 1), Point::euclidean(0, 2), Point::euclidean(0, 3)});
}

std::string parse_message(const nlohmann::json& j) {
  try {
    framework_from_json(j);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(RodLengths, AxisFramework) {
  auto L = rod_lengths(axes33());
  ASSERT_EQ(L.m, 3u);
  ASSERT_EQ(L.n, 3u);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(L(i, j), std::hypot(i + 1, j + 1), 1e-15);
      EXPECT_NEAR(L.u(i, j), (i + 1) * (i + 1) + (j + 1) * (j + 1), 1e-12);
    }
}

TEST(RodLengths, OrthogonalSphericalRodHasZeroU) {
  auto fw = Framework::make(kS, {Point::spherical(1, 0, 0)}, {Point::spherical(0, 1, 0)});
  auto L = rod_lengths(fw);
  EXPECT_NEAR(L(0, 0), std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(L.u(0, 0), 0, 1e-15);
}

TEST(Validate, CoincidentRodEndsAreRejected) {
  EXPECT_THROW(Framework::make(kE, {Point::euclidean(1, 0)}, {Point::euclidean(1, 0)}), InvalidFramework);
  EXPECT_THROW(Framework::make(kS, {Point::spherical(1, 0, 0)}, {Point::spherical(-1, 0, 0)}), InvalidFramework);
  EXPECT_THROW(Framework::make(kE, {}, {Point::euclidean(1, 0)}), InvalidFramework);
}

TEST(Overlap, DistinctJointsDoNotOverlap) {
  EXPECT_EQ(overlap_status(axes33()).status, OverlapStatus::NonOverlapping);
  Rng r(3);
  EXPECT_EQ(overlap_status(random_framework(kS, 3, 3, r)).status, OverlapStatus::P2NonOverlapping);
}

TEST(Overlap, DuplicatedJointIsReported) {
  auto fw = axes33();
  fw.P[2] = fw.P[1];
  auto rep = overlap_status(fw);
  EXPECT_EQ(rep.status, OverlapStatus::Overlapping);
  ASSERT_EQ(rep.within_part_coincidences.size(), 1u);
  EXPECT_EQ(rep.within_part_coincidences[0], (JointPair{'P', 1, 2}));
}

TEST(Overlap, SphericalAntipodesWithinAPart) {
  auto fw = Framework::make(kS, {Point::spherical(1, 0, 0), Point::spherical(0, 1, 1), Point::spherical(0, -1, -1)},
                            {Point::spherical(0, 0, 1)});
  auto rep = overlap_status(fw);
  EXPECT_EQ(rep.status, OverlapStatus::Overlapping);
  ASSERT_EQ(rep.s2_antipodal_within_part.size(), 1u);
  EXPECT_EQ(rep.s2_antipodal_within_part[0], (JointPair{'P', 1, 2}));
  EXPECT_TRUE(rep.within_part_coincidences.empty());
}

TEST(Quotient, NonOverlappingIsUnchanged) {
  auto fw = axes33();
  auto q = quotient(fw);
  EXPECT_EQ(q.P, fw.P);
  EXPECT_EQ(q.Q, fw.Q);
}

TEST(Quotient, DuplicateDropsOneJoint) {
  auto fw = axes33();
  fw.P[2] = fw.P[1];
  auto q = quotient(fw);
  EXPECT_EQ(q.m(), 2u);
  EXPECT_EQ(q.n(), 3u);
  EXPECT_EQ(q.P[0], fw.P[0]);
  EXPECT_EQ(q.P[1], fw.P[1]);
}

TEST(Quotient, AllEqualPartCollapsesToOne) {
  auto fw = axes33();
  fw.P = {fw.P[0], fw.P[0], fw.P[0]};
  auto q = quotient(fw);
  EXPECT_EQ(q.m(), 1u);
  auto c = classify(fw);
  EXPECT_TRUE(c.flexible);
  EXPECT_EQ(c.kind, MechanismKind::SmallPartFree);
  EXPECT_EQ(c.internal_dof_claim, 2);  // n - 1
}

TEST(Quotient, SphericalAntipodesAreIdentified) {
  auto fw = Framework::make(kS, {Point::spherical(1, 0, 0), Point::spherical(0, 1, 1), Point::spherical(0, -1, -1)},
                            {Point::spherical(0, 0, 1), Point::spherical(1, 1, 0)});
  EXPECT_EQ(quotient(fw).m(), 2u);
}

TEST(Quotient, Idempotent) {
  auto o = quotient_idempotence(500, 21);
  EXPECT_TRUE(o.ok()) << o.summary();
}

TEST(Antipodal, NormalizedInputGetsIdentityRecord) {
  auto fw = Framework::make(kS, {Point::spherical(1, 0, 0), Point::spherical(1, 1, 0)},
                            {Point::spherical(1, 0, 1), Point::spherical(1, 0, 2)});
  auto n = normalize_antipodal(fw);
  EXPECT_TRUE(n.flips.identity());
  EXPECT_EQ(n.fw.P, fw.P);
  EXPECT_EQ(n.fw.Q, fw.Q);
  EXPECT_TRUE(n.residual.empty());
}

TEST(Antipodal, LongRodFromQ0FlipsThatJoint) {
  // r_10 > pi/2
  auto fw = Framework::make(kS, {Point::spherical(1, 0, 0), Point::spherical(-1, 0.2, -1)},
                            {Point::spherical(1, 0, 1), Point::spherical(1, 1, 0)});
  ASSERT_GT(rod_lengths(fw)(1, 0), std::numbers::pi / 2);
  auto n = normalize_antipodal(fw);
  EXPECT_TRUE(n.flips.P[1]);
  EXPECT_FALSE(n.flips.P[0]);
  EXPECT_FALSE(n.flips.Q[0]);
  EXPECT_FALSE(n.flips.Q[1]);
  EXPECT_EQ(n.fw.P[1], antipode(fw.P[1]));
  auto L = rod_lengths(n.fw);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_LE(L(i, 0), std::numbers::pi / 2);
  for (std::size_t j = 0; j < 2; ++j) EXPECT_LE(L(0, j), std::numbers::pi / 2);
}

TEST(Antipodal, FlipsAreAnInvolution) {
  auto o = antipodal_involution(500, 22);
  EXPECT_TRUE(o.ok()) << o.summary();
}

TEST(Antipodal, NeedsSphericalFramework) { EXPECT_THROW(normalize_antipodal(axes33()), UsageError); }

TEST(Json, RoundTripInEveryGeometry) {
  Rng r(9);
  for (GeometryKind k : kKinds)
    for (int s = 0; s < 20; ++s) {
      auto fw = random_framework(k, 3, 4, r);
      auto back = framework_from_json(nlohmann::json::parse(to_json(fw).dump()));
      ASSERT_EQ(back.kind, k);
      ASSERT_EQ(back.m(), fw.m());
      ASSERT_EQ(back.n(), fw.n());
      for (std::size_t i = 0; i < fw.m(); ++i) EXPECT_LT(coord_gap(back.P[i], fw.P[i]), 1e-15);
      for (std::size_t j = 0; j < fw.n(); ++j) EXPECT_LT(coord_gap(back.Q[j], fw.Q[j]), 1e-15);
    }
}

TEST(Json, AlternativeModelsAreAccepted) {
  nlohmann::json j = {{"geometry", "hyperbolic"}, {"model", "lobachevsky"}, {"P", {{1.0, 0.0}}}, {"Q", {{0.0, 0.5}}}};
  auto fw = framework_from_json(j);
  EXPECT_NEAR(fw.P[0].x(), std::tanh(0.5), 1e-14);
  nlohmann::json g = {{"geometry", "spherical"}, {"model", "geographic"}, {"P", {{0.0, 0.0}}}, {"Q", {{1.0, 0.3}}}};
  EXPECT_LT(coord_gap(framework_from_json(g).P[0], Point::spherical(1, 0, 0)), 1e-15);
}

TEST(Json, ErrorsNameTheOffendingField) {
  nlohmann::json ok = to_json(axes33());
  auto missing = ok;
  missing.erase("Q");
  EXPECT_NE(parse_message(missing).find("\"Q\""), std::string::npos);

  auto bad_geometry = ok;
  bad_geometry["geometry"] = "elliptic";
  EXPECT_NE(parse_message(bad_geometry).find("\"geometry\""), std::string::npos);

  auto short_point = ok;
  short_point["P"][1] = {2.0};
  EXPECT_NE(parse_message(short_point).find("\"P\"[1]"), std::string::npos);

  auto text = ok;
  text["Q"][2][0] = "x";
  EXPECT_NE(parse_message(text).find("\"Q\"[2]"), std::string::npos);

  auto outside = ok;
  outside["geometry"] = "hyperbolic";
  outside["model"] = "poincare";
  outside["P"] = {{0.1, 0.0}, {2.0, 0.0}};
  EXPECT_NE(parse_message(outside).find("\"P\"[1]"), std::string::npos);

  auto wrong_model = ok;
  wrong_model["model"] = "ambient";
  EXPECT_NE(parse_message(wrong_model).find("\"model\""), std::string::npos);
}

TEST(Json, InvalidFrameworkIsAParseError) {
  nlohmann::json j = {{"geometry", "euclidean"}, {"P", {{1.0, 0.0}}}, {"Q", {{1.0, 0.0}}}};
  EXPECT_THROW(framework_from_json(j), ParseError);
}
