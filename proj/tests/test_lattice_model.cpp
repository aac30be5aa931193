#include <doctest.h>

#include <cmath>

#include "synergy/error.hpp"
#include "synergy/lattice_model.hpp"
#include "synergy/rng.hpp"

using namespace synergy;

namespace {

Config pm1(std::initializer_list<int> spins) { return config_of(std::vector<int>(spins), SpinDomain::pm1); }

}  // namespace

TEST_CASE("plaquette loop is uniform over the even-parity configurations") {
  const auto dist = tc_loop_distribution(LoopModel{4, +1, Basis::z});
  CHECK(dist.num_vars() == 4);
  CHECK(dist.support_size() == 8);
  CHECK(dist.probability(pm1({+1, +1, +1, +1})) == doctest::Approx(1.0 / 8).epsilon(1e-15));
  CHECK(dist.probability(pm1({+1, +1, +1, -1})) == 0.0);
  CHECK(dist.probability(pm1({-1, +1, -1, +1})) == doctest::Approx(1.0 / 8));
}

TEST_CASE("odd flux loop flips the admissible sector") {
  const auto dist = tc_loop_distribution(LoopModel{4, -1, Basis::z});
  CHECK(dist.probability(pm1({+1, +1, +1, -1})) == doctest::Approx(1.0 / 8));
  CHECK(dist.probability(pm1({+1, +1, +1, +1})) == 0.0);
  // Enumeration oracle: every configuration with product -1 and nothing else.
  for (Config c = 0; c < 16; ++c) {
    const int product = parity(c, 0b1111);
    CHECK(dist.probability(c) == doctest::Approx(product == -1 ? 0.125 : 0.0));
  }
}

TEST_CASE("three-spin loop keeps four states") {
  const auto dist = tc_loop_distribution(LoopModel{3, +1, Basis::z});
  CHECK(dist.support_size() == 4);
  dist.for_each([](Config, double p) { CHECK(p == doctest::Approx(0.25)); });
}

TEST_CASE("x-basis loops share the parity engine") {
  const auto z = tc_loop_distribution(LoopModel{4, +1, Basis::z});
  const auto x = tc_loop_distribution(LoopModel{4, +1, Basis::x});
  CHECK(z.entries() == x.entries());
}

TEST_CASE("loop validation") {
  CHECK_THROWS_AS(tc_loop_distribution(LoopModel{2, +1, Basis::z}), UsageError);
  CHECK_THROWS_AS(tc_loop_distribution(LoopModel{4, 0, Basis::z}), UsageError);
  CHECK_THROWS_WITH(tc_loop_distribution(LoopModel{2, +1, Basis::z}),
                    doctest::Contains("length ≥ 3"));
}

TEST_CASE("every supported configuration satisfies the flux constraint") {
  for (std::size_t length = 3; length <= 12; ++length) {
    for (int flux : {+1, -1}) {
      const auto dist = tc_loop_distribution(LoopModel{length, flux, Basis::z});
      CHECK(dist.support_size() == (std::size_t{1} << (length - 1)));
      dist.for_each([&](Config c, double p) {
        CHECK(parity(c, mask_of(length)) == flux);
        CHECK(p == doctest::Approx(std::ldexp(1.0, 1 - static_cast<int>(length))));
      });
    }
  }
}

TEST_CASE("loop marginals: single spins fair, pairs uniform") {
  const auto dist = tc_loop_distribution(LoopModel{4, +1, Basis::z});
  for (std::size_t i = 0; i < 4; ++i) {
    const auto m = dist.marginal({i});
    CHECK(m.probability(0) == doctest::Approx(0.5));
    CHECK(m.probability(1) == doctest::Approx(0.5));
    for (std::size_t j = i + 1; j < 4; ++j) {
      const auto pair = dist.marginal({i, j});
      for (Config c = 0; c < 4; ++c) CHECK(pair.probability(c) == doctest::Approx(0.25));
    }
  }
}

TEST_CASE("iid coins") {
  const auto four = iid_coin_distribution(4);
  for (Config c = 0; c < 16; ++c) CHECK(four.probability(c) == doctest::Approx(1.0 / 16));
  const auto one = iid_coin_distribution(1);
  CHECK(one.probability(0) == doctest::Approx(0.5));
  CHECK(one.probability(1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(iid_coin_distribution(0), UsageError);
}

TEST_CASE("conditioning a plaquette on the fourth spin") {
  const auto dist = tc_loop_distribution(LoopModel{4, +1, Basis::z});
  const auto up = condition(dist, {{3, +1}});
  CHECK(up.num_vars() == 3);
  CHECK(up.support_size() == 4);
  up.for_each([](Config c, double p) {
    CHECK(parity(c, 0b111) == +1);
    CHECK(p == doctest::Approx(0.25));
  });
  const auto down = condition(dist, {{3, -1}});
  CHECK(down.support_size() == 4);
  down.for_each([](Config c, double p) {
    CHECK(parity(c, 0b111) == -1);
    CHECK(p == doctest::Approx(0.25));
  });
}

TEST_CASE("conditioning iid coins leaves a fair coin") {
  const auto dist = condition(iid_coin_distribution(2), {{1, +1}});
  CHECK(dist.num_vars() == 1);
  CHECK(dist.probability(0) == doctest::Approx(0.5));
}

TEST_CASE("conditioning on an impossible event is an error") {
  const auto dist = tc_loop_distribution(LoopModel{3, +1, Basis::z});
  CHECK_THROWS_WITH(condition(ExactDistribution(2, {{0b00, 1.0}}), {{0, -1}}),
                    doctest::Contains("zero-probability"));
  CHECK_THROWS_AS(condition(dist, {{0, +1}, {1, -1}, {2, -1}}), DataError);  // nothing left
  CHECK_THROWS_AS(condition(dist, {{0, +1}, {0, -1}}), DataError);
  CHECK_THROWS_AS(condition(dist, {{0, 0}}), DataError);
}

TEST_CASE("condition and marginalisation commute when the conditioned spin is kept") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<Config, double>> weights;
    for (Config c = 0; c < 32; ++c) weights.emplace_back(c, rng.uniform() + 0.01);
    const ExactDistribution dist(5, weights);
    // Keep variables {1, 3, 4} and condition on variable 3 = -1.
    const auto a = condition(dist, {{3, -1}}).marginal({1, 3});         // original vars 1 and 4
    const auto b = condition(dist.marginal({1, 3, 4}), {{1, -1}});      // var 3 is local 1
    CHECK(a.num_vars() == b.num_vars());
    for (Config c = 0; c < 4; ++c) CHECK(a.probability(c) == doctest::Approx(b.probability(c)).epsilon(1e-12));
  }
}

TEST_CASE("normalisation and validation at construction") {
  const ExactDistribution dist(2, {{0, 2.0}, {3, 2.0}});
  CHECK(dist.probability(0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ExactDistribution(2, {{0, -1.0}}), DataError);
  CHECK_THROWS_AS(ExactDistribution(2, {{0, 0.0}}), DataError);
  CHECK_THROWS_AS(ExactDistribution(2, {{4, 1.0}}), DataError);
  CHECK_THROWS_AS(ExactDistribution(0, {{0, 1.0}}), DataError);
}

TEST_CASE("sparse storage above the dense limit") {
  const ExactDistribution dist(30, {{Config{1} << 29, 1.0}, {5, 3.0}});
  CHECK_FALSE(dist.is_dense());
  CHECK(dist.probability(5) == doctest::Approx(0.75));
  const auto loop = tc_loop_distribution(LoopModel{26, +1, Basis::z});
  CHECK_FALSE(loop.is_dense());
  CHECK(loop.marginal({0, 25}).probability(0) == doctest::Approx(0.25));
}

TEST_CASE("distribution JSON lists nonzero entries with pm1 spins") {
  const auto json = to_json(tc_loop_distribution(LoopModel{3, +1, Basis::z}));
  CHECK(json["n"] == 3);
  REQUIRE(json["probs"].size() == 4);
  CHECK(json["probs"][0]["config"] == nlohmann::json({1, 1, 1}));
  CHECK(json["probs"][0]["p"].get<double>() == doctest::Approx(0.25));
}
