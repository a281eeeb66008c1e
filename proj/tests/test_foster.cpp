#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cqed/foster.hpp"

using namespace cqed;
using Catch::Approx;

namespace {
constexpr double fF = 1e-15;
constexpr double nH = 1e-9;
constexpr double GHz = 1e9;
}

TEST_CASE("half-wave ladder, measured device line", "[foster]") {
  const LineSpec line{645.752, 6.78014 * GHz, LineTopology::half_wave};
  const FosterModes ladder = decompose(line, 2);

  REQUIRE(ladder.series_c.has_value());
  CHECK(*ladder.series_c == Approx(57.1 * fF).epsilon(1e-3));
  REQUIRE(ladder.modes.size() == 2);

  CHECK(ladder.modes[0].p == 1);
  CHECK(ladder.modes[0].f_p == Approx(6.78014 * GHz).epsilon(1e-12));
  CHECK(ladder.modes[0].z_p == Approx(411.098).epsilon(1e-4));
  CHECK(ladder.modes[0].c_p == Approx(57.1 * fF).epsilon(1e-3));
  CHECK(ladder.modes[0].l_p == Approx(9.65 * nH).epsilon(1e-3));

  CHECK(ladder.modes[1].p == 2);
  CHECK(ladder.modes[1].f_p == Approx(2 * 6.78014 * GHz).epsilon(1e-12));
  CHECK(ladder.modes[1].z_p == Approx(205.549).epsilon(1e-4));
  CHECK(ladder.modes[1].c_p == Approx(57.1 * fF).epsilon(1e-3));
  CHECK(ladder.modes[1].l_p == Approx(9.65 * nH / 4.0).epsilon(1e-3));
}

TEST_CASE("every ladder mode reproduces its own frequency and impedance",
          "[foster][property]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> z(50.0, 2000.0);
  std::uniform_real_distribution<double> f(1.0, 20.0);
  for (LineTopology topo : {LineTopology::half_wave, LineTopology::quarter_wave}) {
    for (int i = 0; i < 100; ++i) {
      const LineSpec line{z(rng), f(rng) * GHz, topo};
      const FosterModes ladder = decompose(line, 5);
      for (const FosterMode& m : ladder.modes) {
        CHECK(1.0 / (2.0 * std::numbers::pi * std::sqrt(m.l_p * m.c_p)) ==
              Approx(m.f_p).epsilon(1e-12));
        CHECK(std::sqrt(m.l_p / m.c_p) == Approx(m.z_p).epsilon(1e-12));
        // z_p * p constant across the ladder.
        CHECK(m.z_p * m.p == Approx(ladder.modes[0].z_p * ladder.modes[0].p).epsilon(1e-12));
        // Mode capacitance is p-independent.
        CHECK(m.c_p == Approx(ladder.modes[0].c_p).epsilon(1e-12));
      }
      if (topo == LineTopology::half_wave) {
        REQUIRE(ladder.series_c.has_value());
        CHECK(*ladder.series_c == Approx(ladder.modes[0].c_p).epsilon(1e-12));
      } else {
        CHECK_FALSE(ladder.series_c.has_value());
      }
    }
  }
}

TEST_CASE("single-mode decomposition impedance", "[foster]") {
  const LineSpec line{800.0, 5.0 * GHz, LineTopology::half_wave};
  const FosterModes one = decompose(line, 1);
  REQUIRE(one.modes.size() == 1);
  CHECK(one.modes[0].z_p == Approx(2.0 * 800.0 / std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("quarter-wave ladder: odd harmonics, shifted impedance convention",
          "[foster]") {
  const LineSpec line{722.0, 6.0 * GHz, LineTopology::quarter_wave};
  const FosterModes ladder = decompose(line, 3);
  REQUIRE(ladder.modes.size() == 3);
  CHECK(ladder.modes[0].p == 1);
  CHECK(ladder.modes[1].p == 3);
  CHECK(ladder.modes[2].p == 5);
  CHECK(ladder.modes[0].z_p == Approx(4.0 * 722.0 / std::numbers::pi).epsilon(1e-14));
  CHECK(ladder.modes[1].f_p == Approx(18.0 * GHz).epsilon(1e-14));
}

TEST_CASE("line_from_lc inverts the fundamental", "[foster]") {
  const LineSpec line = line_from_lc(57.1 * fF, 9.65 * nH, LineTopology::half_wave);
  CHECK(line.z_0 == Approx(645.752).epsilon(1e-5));
  CHECK(line.f_1 == Approx(6.78014 * GHz).epsilon(1e-5));

  // Quarter-wave convention: z_0 = pi * Z_eq / 4.
  const double c = 10.0 * fF;
  const double l = 1.0 / (std::pow(2.0 * std::numbers::pi * 6.0 * GHz, 2) * c);
  const LineSpec quarter = line_from_lc(c, l, LineTopology::quarter_wave);
  CHECK(quarter.z_0 == Approx(std::numbers::pi * std::sqrt(l / c) / 4.0).epsilon(1e-12));
  CHECK(quarter.z_0 == Approx(2083.3).epsilon(1e-3));
}

TEST_CASE("decompose and line_from_lc round-trip on mode 1", "[foster][property]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> cap(1.0, 300.0);
  std::uniform_real_distribution<double> ind(0.5, 50.0);
  for (LineTopology topo : {LineTopology::half_wave, LineTopology::quarter_wave}) {
    for (int i = 0; i < 100; ++i) {
      const double c = cap(rng) * fF;
      const double l = ind(rng) * nH;
      const LineSpec line = line_from_lc(c, l, topo);
      const FosterModes ladder = decompose(line, 1);
      CHECK(ladder.modes[0].c_p == Approx(c).epsilon(1e-12));
      CHECK(ladder.modes[0].l_p == Approx(l).epsilon(1e-12));
    }
  }
}

TEST_CASE("series capacitance drop rule", "[foster]") {
  CHECK(series_cap_negligible(57.1 * fF, 9.0 * fF));          // 6.3x > 5x
  CHECK_FALSE(series_cap_negligible(57.1 * fF, 20.0 * fF));   // 2.9x
  CHECK_FALSE(series_cap_negligible(57.1 * fF, 9.0 * fF, 7.0));  // configurable
}

TEST_CASE("foster domain errors", "[foster]") {
  CHECK_THROWS_AS(decompose({645.0, 6.78 * GHz, LineTopology::half_wave}, 0), domain_error);
  CHECK_THROWS_AS(line_from_lc(0.0, 9.65 * nH, LineTopology::half_wave), domain_error);
  CHECK_THROWS_AS(decompose({-1.0, 6.78 * GHz, LineTopology::half_wave}, 2), domain_error);
}
