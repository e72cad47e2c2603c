#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "orbitcount/holonomy.hpp"
#include "orbitcount/mapping_class.hpp"

using namespace orbitcount;

namespace {

Word random_reduced(std::mt19937& rng, const GroupPresentation& pres, std::size_t len) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(pres.alphabet_size()) - 1);
  Word w;
  while (free_reduce(w).size() < len) w.push_back(static_cast<Letter>(pick(rng)));
  return free_reduce(w);
}

}  // namespace

TEST_CASE("modular torus preset") {
  auto X = Holonomy::modular_torus();
  auto& pres = X.presentation();

  // preset integer matrices have traces (3, 3) and commutator trace -2
  CHECK(X.evaluate(pres.parse_word("a1")).abs_trace() == Catch::Approx(3.0));
  CHECK(X.evaluate(pres.parse_word("b1")).abs_trace() == Catch::Approx(3.0));
  CHECK(X.evaluate(pres.parse_word("a1 b1 A1 B1")).abs_trace() == Catch::Approx(2.0).margin(1e-12));

  // Fricke identity tr^2 A + tr^2 B + tr^2 AB = tr A tr B tr AB for the cusped torus
  double x = X.evaluate(pres.parse_word("a1")).abs_trace();
  double y = X.evaluate(pres.parse_word("b1")).abs_trace();
  double z = X.evaluate(pres.parse_word("a1 b1")).abs_trace();
  CHECK(x * x + y * y + z * z == Catch::Approx(x * y * z).margin(1e-10));

  // geodesic length of a
  CHECK(X.geodesic_length(pres.parse_word("a1")) == Catch::Approx(2.0 * std::acosh(1.5)).epsilon(1e-12));
  // power law
  CHECK(X.geodesic_length(pres.parse_word("a1 a1")) ==
        Catch::Approx(2.0 * X.geodesic_length(pres.parse_word("a1"))).margin(1e-12));
  // peripheral word is parabolic
  CHECK_THROWS_AS(X.geodesic_length(pres.parse_word("a1 b1 A1 B1")), not_hyperbolic_error);

  // the FN build at the symmetric point reproduces the modular length spectrum
  auto Y = Holonomy::build(FenchelNielsen::modular_torus());
  for (const char* p : {"a1", "b1", "a1 b1", "a1 a1 b1", "a1 B1", "a1 a1 b1 b1"}) {
    CHECK(Y.evaluate(pres.parse_word(p)).abs_trace() ==
          Catch::Approx(X.evaluate(pres.parse_word(p)).abs_trace()).epsilon(1e-9));
  }
}

TEST_CASE("punctured torus Fenchel-Nielsen construction") {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> lend(0.4, 3.0), twd(-2.5, 2.5);

  for (int t = 0; t < 10; ++t) {
    FenchelNielsen fn{{1, 1}, {lend(rng)}, {twd(rng)}};
    auto X = Holonomy::build(fn);
    CHECK(X.peripheral_trace_residual() <= 1e-9);
    // pants curve length is the requested one
    CHECK(X.geodesic_length(X.presentation().parse_word("a1")) == Catch::Approx(fn.lengths[0]).epsilon(1e-10));
  }

  // conjugacy invariance of lengths
  auto X = Holonomy::build({{1, 1}, {1.3}, {0.7}});
  auto& pres = X.presentation();
  for (int t = 0; t < 100; ++t) {
    Word w = random_reduced(rng, pres, 1 + t % 7);
    if (cyclic_reduce(w).empty()) continue;
    Word g = random_reduced(rng, pres, 1 + t % 4);
    Word conj = free_reduce(concat(concat(g, w), inverse_word(g)));
    double lw, lc;
    try {
      lw = X.geodesic_length(w);
      lc = X.geodesic_length(conj);
    } catch (const not_hyperbolic_error&) {
      continue;  // peripheral sample
    }
    CHECK(lc == Catch::Approx(lw).margin(1e-10));
  }

  // twisting by a full length realizes the Dehn twist about the pants curve
  double l = 1.7, tau = 0.43;
  auto Z0 = Holonomy::build({{1, 1}, {l}, {tau}});
  auto Z1 = Holonomy::build({{1, 1}, {l}, {tau + l}});
  auto Ta = twist_generators(pres)[0];
  for (const char* p : {"b1", "a1 b1", "a1 B1", "a1 a1 b1 b1"}) {
    Word w = pres.parse_word(p);
    CHECK(Z1.geodesic_length(w) == Catch::Approx(Z0.geodesic_length(Ta.apply_word(w))).epsilon(1e-9));
  }
  // marked structures differ but the pants curve keeps its length
  CHECK(Z0.geodesic_length(pres.parse_word("a1")) == Catch::Approx(Z1.geodesic_length(pres.parse_word("a1"))));
  CHECK(Z0.geodesic_length(pres.parse_word("b1")) != Catch::Approx(Z1.geodesic_length(pres.parse_word("b1"))));
}

TEST_CASE("genus-2 Fenchel-Nielsen construction") {
  std::mt19937 rng(57);
  std::uniform_real_distribution<double> lend(0.8, 3.2), twd(-2.0, 2.0);
  for (int t = 0; t < 10; ++t) {
    FenchelNielsen fn{{2, 0}, {lend(rng), lend(rng), lend(rng)}, {twd(rng), twd(rng), twd(rng)}};
    auto H = Holonomy::build(fn);
    auto& pres = H.presentation();
    CHECK(H.relator_residual() <= 1e-9);
    CHECK(H.geodesic_length(pres.parse_word("a1")) == Catch::Approx(fn.lengths[0]).epsilon(1e-10));
    CHECK(H.geodesic_length(pres.parse_word("a2")) == Catch::Approx(fn.lengths[1]).epsilon(1e-10));
    // the separating pants curve is the class of [a1,b1]
    CHECK(H.geodesic_length(pres.parse_word("a1 b1 A1 B1")) == Catch::Approx(fn.lengths[2]).epsilon(1e-10));
  }

  // preset builds and validates
  auto R = holonomy_preset("genus2_regular");
  CHECK(R.relator_residual() <= 1e-9);
  CHECK_THROWS_AS(holonomy_preset("nope"), config_error);

  // structure errors
  CHECK_THROWS_AS(Holonomy::build({{2, 0}, {1.0, 1.0}, {0, 0}}), structure_error);
  CHECK_THROWS_AS(Holonomy::build({{2, 0}, {1.0, -1.0, 1.0}, {0, 0, 0}}), structure_error);
}

TEST_CASE("liouville intersection is the weighted length") {
  auto X = Holonomy::modular_torus();
  auto& pres = X.presentation();
  auto sys = WeightedCurveSystem::parse(pres, "1:a1\n1:b1");
  double la = X.geodesic_length(pres.parse_word("a1"));
  double lb = X.geodesic_length(pres.parse_word("b1"));
  CHECK(X.liouville_intersection(sys) == Catch::Approx(la + lb));
  // homogeneity in the weights
  CHECK(X.liouville_intersection(sys.scaled(2.0)) == Catch::Approx(2.0 * (la + lb)));
  // empty system pairs to zero
  CHECK(X.liouville_intersection(WeightedCurveSystem(pres)) == 0.0);
}

TEST_CASE("axis endpoints") {
  auto X = Holonomy::modular_torus();
  auto& pres = X.presentation();

  // diagonal matrices fix 0 and infinity
  auto ax = Holonomy::fixed_points(Mat2{2.0, 0, 0, 0.5});
  CHECK(std::isinf(ax.attracting));
  CHECK(ax.repelling == Catch::Approx(0.0));

  // axis of the inverse swaps endpoints
  Word w = pres.parse_word("a1 a1 b1");
  auto a1 = X.axis(w);
  auto a2 = X.axis(inverse_word(w));
  CHECK(a1.attracting == Catch::Approx(a2.repelling));
  CHECK(a1.repelling == Catch::Approx(a2.attracting));

  // equivariance: axis(g w g^-1) = image of axis(w) under rho(g)
  std::mt19937 rng(8);
  for (int t = 0; t < 20; ++t) {
    Word g = random_reduced(rng, pres, 1 + t % 4);
    Word conj = free_reduce(concat(concat(g, w), inverse_word(g)));
    auto base = X.axis(w);
    auto moved = X.axis(conj);
    Mat2 G = X.evaluate(g).m;
    CHECK(moved.attracting == Catch::Approx(G.apply_boundary(base.attracting)).margin(1e-8));
    CHECK(moved.repelling == Catch::Approx(G.apply_boundary(base.repelling)).margin(1e-8));
  }

  CHECK_THROWS_AS(X.axis(pres.parse_word("a1 b1 A1 B1")), not_hyperbolic_error);
}
