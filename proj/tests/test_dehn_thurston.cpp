#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "orbitcount/functional.hpp"
#include "orbitcount/intersection.hpp"

using namespace orbitcount;

TEST_CASE("multicurve enumeration") {
  SECTION("punctured torus, N = 1") {
    auto all = enumerate_multicurves(SurfaceSignature{1, 1}, 1);
    REQUIRE(all.size() == 4);
    std::set<std::pair<long long, long long>> got;
    for (auto& c : all) got.insert(c.mt[0]);
    CHECK(got == std::set<std::pair<long long, long long>>{{0, 1}, {1, -1}, {1, 0}, {1, 1}});
  }

  SECTION("no duplicates and valid invariants") {
    for (SurfaceSignature sig : {SurfaceSignature{1, 1}, SurfaceSignature{2, 0}}) {
      std::set<std::string> seen;
      enumerate_multicurves(sig, 3, [&](const DTCoordinates& c) {
        CHECK_NOTHROW(c.validate());
        CHECK(seen.insert(c.format()).second);
      });
    }
  }

  SECTION("count grows like N^dim") {
    for (SurfaceSignature sig : {SurfaceSignature{1, 1}, SurfaceSignature{2, 0}}) {
      long long n1 = sig.genus == 2 ? 6 : 8;
      long long n2 = 2 * n1;
      double c1 = 0, c2 = 0;
      enumerate_multicurves(sig, n1, [&](const DTCoordinates&) { c1 += 1; });
      enumerate_multicurves(sig, n2, [&](const DTCoordinates&) { c2 += 1; });
      double slope = std::log(c2 / c1) / std::log(2.0);
      CHECK(slope == Catch::Approx(sig.dimension()).epsilon(0.10));
    }
  }

  CHECK_THROWS_AS(enumerate_multicurves(SurfaceSignature{1, 1}, 0), precondition_error);
}

TEST_CASE("punctured torus coordinates and words") {
  auto X = Holonomy::modular_torus();
  auto& pres = X.presentation();
  Intersector I(X);
  auto sig = SurfaceSignature{1, 1};

  // the marking table: (1,0) is the dual slope b, (0,k) is k pants curves
  auto b = dt_to_system(pres, DTCoordinates{sig, {{1, 0}}});
  REQUIRE(b.size() == 1);
  CHECK(b.components()[0].first == CyclicWord::canonical(pres, pres.parse_word("b1")));

  auto ka = dt_to_system(pres, DTCoordinates{sig, {{0, 3}}});
  REQUIRE(ka.size() == 1);
  CHECK(ka.components()[0].first == CyclicWord::canonical(pres, pres.parse_word("a1")));
  CHECK(ka.components()[0].second == Catch::Approx(3.0));

  // lattice pairing oracle: i(c1, c2) = |m1 t2 - m2 t1|
  std::mt19937 rng(64);
  std::uniform_int_distribution<long long> pick(-9, 9);
  for (int t = 0; t < 40; ++t) {
    long long m1 = std::abs(pick(rng)), t1 = pick(rng);
    long long m2 = std::abs(pick(rng)), t2 = pick(rng);
    if ((m1 == 0 && t1 <= 0) || (m2 == 0 && t2 <= 0)) continue;
    auto s1 = dt_to_system(pres, DTCoordinates{sig, {{m1, t1}}});
    auto s2 = dt_to_system(pres, DTCoordinates{sig, {{m2, t2}}});
    CHECK(I.pairing(s1, s2) == Catch::Approx(static_cast<double>(std::llabs(m1 * t2 - m2 * t1))));
  }

  // round trip on random coordinates
  std::uniform_int_distribution<long long> big(-40, 40);
  int trips = 0;
  while (trips < 200) {
    long long m = std::llabs(big(rng)), tt = big(rng);
    if (m == 0 && tt <= 0) continue;
    DTCoordinates c{sig, {{m, tt}}};
    auto sys = dt_to_system(pres, c);
    CHECK(dt_coordinates_of(X, sys) == c);
    ++trips;
  }

  // emitted systems are simple with pairwise disjoint components (full scan)
  enumerate_multicurves(sig, 3, [&](const DTCoordinates& c) {
    auto sys = dt_to_system(pres, c);
    for (const auto& [comp, w] : sys.components()) CHECK(I.self(comp) == 0);
    for (const auto& [c1, w1] : sys.components())
      for (const auto& [c2, w2] : sys.components())
        if (!(c1 == c2)) CHECK(I.geometric(c1, c2) == 0);
  });
}

TEST_CASE("genus-2 split multicurves") {
  auto H = holonomy_preset("genus2_regular");
  auto& pres = H.presentation();
  Intersector I(H);
  auto sig = SurfaceSignature{2, 0};

  // per-handle slopes and separating copies
  auto sys = dt_to_system(pres, DTCoordinates{sig, {{1, 0}, {1, 1}, {0, 2}}});
  REQUIRE(sys.size() == 3);
  // components: b1 (dual to a1), the (1,1) slope in handle two, two copies of s
  CHECK(I.pairing(sys, WeightedCurveSystem::parse(pres, "1:a1")) == 1.0);
  CHECK(I.pairing(sys, WeightedCurveSystem::parse(pres, "1:a2")) == 1.0);

  // the connector stack
  auto conn = dt_to_system(pres, DTCoordinates{sig, {{0, 0}, {0, 0}, {2, 0}}});
  REQUIRE(conn.size() == 1);
  CHECK(conn.components()[0].first == CyclicWord::canonical(pres, pres.parse_word("a1 a2")));

  // all emitted genus-2 configurations are simple and disjoint (small scan;
  // configurations without a tracer table are skipped)
  int checked = 0, skipped = 0;
  enumerate_multicurves(sig, 2, [&](const DTCoordinates& c) {
    WeightedCurveSystem s(pres);
    try {
      s = dt_to_system(pres, c);
    } catch (const unsupported_signature_error&) {
      ++skipped;
      return;
    }
    ++checked;
    for (const auto& [comp, w] : s.components()) CHECK(I.self(comp) == 0);
    for (const auto& [c1, w1] : s.components())
      for (const auto& [c2, w2] : s.components())
        if (!(c1 == c2)) CHECK(I.geometric(c1, c2) == 0);
  });
  CHECK(checked > 0);
  WARN("genus-2 scan: " << checked << " configurations checked, " << skipped << " without tracer tables");
}

TEST_CASE("functional evaluation on lattice points") {
  auto X = Holonomy::modular_torus();
  auto& pres = X.presentation();
  auto sig = SurfaceSignature{1, 1};

  auto alpha = WeightedCurveSystem::parse(pres, "1:a1\n1:b1");
  auto Fi = HomogeneousFunctional::intersect(X, alpha);
  auto Fl = HomogeneousFunctional::length(X);

  // intersect(alpha) against (0,1) is i(b,.) + i(a,.) = 1 on the dual slope
  CHECK(evaluate_functional(Fi, DTCoordinates{sig, {{0, 1}}}) == Catch::Approx(1.0));
  // exact closed form: m + |t|
  CHECK(evaluate_functional(Fi, DTCoordinates{sig, {{3, -4}}}) == Catch::Approx(7.0));

  // homogeneity under integer scaling
  std::mt19937 rng(9);
  std::uniform_int_distribution<long long> pick(-6, 6);
  for (int t = 0; t < 12; ++t) {
    long long m = std::llabs(pick(rng)), tw = pick(rng);
    if (m == 0 && tw <= 0) continue;
    DTCoordinates c{sig, {{m, tw}}};
    DTCoordinates c2{sig, {{2 * m, 2 * tw}}};
    CHECK(evaluate_functional(Fi, c2) == Catch::Approx(2.0 * evaluate_functional(Fi, c)));
    CHECK(evaluate_functional(Fl, c2) == Catch::Approx(2.0 * evaluate_functional(Fl, c)).epsilon(1e-9));
  }

  // length of twist-only coordinates: parallel pants curves
  double la = X.geodesic_length(pres.parse_word("a1"));
  CHECK(evaluate_functional(Fl, DTCoordinates{sig, {{0, 5}}}) == Catch::Approx(5 * la));

  // the Thurston ratio functional is homogeneous and positive
  auto Ft = HomogeneousFunctional::thurston_ratio(X, 3);
  DTCoordinates c{sig, {{2, 3}}};
  DTCoordinates cc{sig, {{4, 6}}};
  CHECK(evaluate_functional(Ft, cc) == Catch::Approx(2.0 * evaluate_functional(Ft, c)).epsilon(1e-9));
  CHECK(evaluate_functional(Ft, c) > 0);
}
