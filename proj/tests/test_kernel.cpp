#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "veerflow/kernel.hpp"

using namespace veerflow;

TEST(Kernel, ValidationPassesOnFixtures) {
  for (const auto& f : fixtures::all()) {
    const auto& vt = fixtures::context(f.sig).vt;
    const ValidationReport rep = validate_veering(vt);
    EXPECT_TRUE(rep.valid) << f.sig;
    for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << f.sig << " " << c.name << " " << c.witness;
  }
}

TEST(Kernel, EdgeClassesAndAngles) {
  for (const auto& f : fixtures::all()) {
    const auto& vt = fixtures::context(f.sig).vt;
    EXPECT_EQ(static_cast<int>(vt.edge_members.size()), vt.n);
    std::size_t total = 0;
    for (const auto& m : vt.edge_members) total += m.size();
    EXPECT_EQ(total, 6u * vt.n);
    std::vector<int> tops(vt.n, 0), bottoms(vt.n, 0);
    for (const auto& r : vt.roles) {
      tops[r.top]++;
      bottoms[r.bottom]++;
      EXPECT_NE(r.top_local, r.bottom_local);
      EXPECT_EQ(r.top_local + r.bottom_local, 5);
    }
    for (int e = 0; e < vt.n; ++e) {
      EXPECT_EQ(tops[e], 1);
      EXPECT_EQ(bottoms[e], 1);
      const auto& st = vt.stars[e];
      EXPECT_GE(st.sides[0].fan_length(), 1);
      EXPECT_GE(st.sides[1].fan_length(), 1);
      EXPECT_EQ(st.degree(), static_cast<int>(vt.edge_members[e].size()));
      EXPECT_EQ(st.sides[0].tets.front(), st.bottom_tet);
      EXPECT_EQ(st.sides[0].tets.back(), st.top_tet);
    }
  }
}

TEST(Kernel, FanTetrahedraCarryTheEdgeAsZeroEdge) {
  for (const auto& f : fixtures::all()) {
    const auto& vt = fixtures::context(f.sig).vt;
    for (int e = 0; e < vt.n; ++e)
      for (const auto& side : vt.stars[e].sides)
        for (std::size_t i = 1; i + 1 < side.tets.size(); ++i) {
          const int t = side.tets[i];
          EXPECT_NE(vt.roles[t].top_local, side.locals[i]);
          EXPECT_NE(vt.roles[t].bottom_local, side.locals[i]);
          EXPECT_EQ(vt.edge_of[t][side.locals[i]], e);
        }
  }
}

TEST(Kernel, DeltaOfTheFigureEight) {
  const auto& vt = fixtures::context("cPcbbbiht_12").vt;
  EXPECT_EQ(delta_tau(vt), 2);
  EXPECT_NE(vt.veer[0], vt.veer[1]);
  for (const auto& st : vt.stars) {
    EXPECT_EQ(st.sides[0].fan_length(), 2);
    EXPECT_EQ(st.sides[1].fan_length(), 2);
  }
}

TEST(Kernel, DeltaBoundsFanLengths) {
  for (const auto& f : fixtures::all()) {
    const auto& vt = fixtures::context(f.sig).vt;
    const int d = delta_tau(vt);
    int seen = 0;
    for (const auto& st : vt.stars)
      for (const auto& s : st.sides) {
        EXPECT_LE(s.fan_length(), d);
        seen = std::max(seen, s.fan_length());
      }
    EXPECT_EQ(seen, d);
  }
}

TEST(Kernel, OneThreeFanExists) {
  const auto& vt = fixtures::context("eLAkbccddhhsqs_1220").vt;
  bool found = false;
  for (const auto& st : vt.stars) {
    const int a = st.sides[0].fan_length(), b = st.sides[1].fan_length();
    if (std::min(a, b) == 1 && std::max(a, b) == 3) found = true;
  }
  EXPECT_TRUE(found);
}

TEST(Kernel, SuppliedWrongVeersRejected) {
  auto raw = with_veers(fixtures::context("cPcbbbiht_12").vt);
  raw.veers[0] = opposite(raw.veers[0]);
  try {
    build_veering(raw);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "VeerMismatch");
  }
}
