#include "efr/cases.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace efr;

TEST_CASE("benchmark geometry and durations") {
  BenchmarkSpec b = benchmark_spec(BenchmarkKind::RisingBubble);
  CHECK(b.x_max == 10000.0);
  CHECK(b.z_max == 10000.0);
  CHECK(b.t_final == 1020.0);
  CHECK(b.theta_ref == 300.0);
  BenchmarkSpec d = benchmark_spec(BenchmarkKind::DensityCurrent);
  CHECK(d.x_max == 25600.0);
  CHECK(d.z_max == 6400.0);
  CHECK(d.t_final == 900.0);
  CHECK(d.default_snapshot_times == std::vector<double>{300.0, 600.0, 750.0, 900.0});
}

TEST_CASE("hydrostatic pressure frozen values") {
  Constants c;
  CHECK(hydrostatic_pressure(0.0, 300.0, c) == doctest::Approx(1.0e5).epsilon(1e-15));
  // high-precision references for p0 (1 - g z/(cp theta))^(cp/R)
  CHECK(hydrostatic_pressure(1000.0, 300.0, c) ==
        doctest::Approx(89062.044078736333242).epsilon(1e-13));
  CHECK(hydrostatic_pressure(2000.0, 300.0, c) ==
        doctest::Approx(79005.917038603762514).epsilon(1e-13));
  CHECK(hydrostatic_pressure(6400.0, 300.0, c) ==
        doctest::Approx(44135.810580474735168).epsilon(1e-13));
  CHECK_THROWS_AS(hydrostatic_pressure(40000.0, 300.0, c), std::domain_error);
  CHECK_THROWS_AS(hydrostatic_pressure(100.0, -5.0, c), std::domain_error);
}

TEST_CASE("unperturbed background column frozen values") {
  Constants c;
  Grid g = build_grid(0.0, 10000.0, 0.0, 10000.0, 2000.0);
  State s = init_rising_bubble(g, c, 0.0);
  const int ground = g.cell(0, 0);  // centroid z = 1000 m
  CHECK(s.rho[ground] == doctest::Approx(1.0692806518643902304).epsilon(1e-13));
  CHECK(s.T[ground] == doctest::Approx(290.21446384039900249).epsilon(1e-13));
  CHECK(s.p[ground] == doctest::Approx(89062.044078736333242).epsilon(1e-13));
  CHECK(s.u[ground] == 0.0);
  CHECK(s.w[ground] == 0.0);
  CHECK(s.K[ground] == 0.0);
  CHECK(s.h[ground] == doctest::Approx(c.cp() * s.T[ground]).epsilon(1e-14));
}

TEST_CASE("initial states satisfy the equation of state exactly") {
  Constants c;
  Grid g = build_grid(0.0, 10000.0, 0.0, 10000.0, 500.0);
  for (const State& s :
       {init_rising_bubble(g, c, 2.0), init_density_current(g, c, -15.0)}) {
    for (int i = 0; i < g.cell_count(); ++i)
      CHECK(s.p[i] == doctest::Approx(s.rho[i] * c.R * s.T[i]).epsilon(1e-12));
  }
}

TEST_CASE("warm cone perturbation of the rising-bubble state") {
  Constants c;
  Grid g = build_grid(0.0, 10000.0, 0.0, 10000.0, 125.0);
  State s = init_rising_bubble(g, c, 2.0);
  Field tp = theta_perturbation(s.T, s.p, 300.0, c);
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const double r = std::hypot(g.xc(i) - 5000.0, g.zc(k) - 2000.0);
      const double expect = r <= 2000.0 ? 2.0 * (1.0 - r / 2000.0) : 0.0;
      CHECK(tp[g.cell(i, k)] == doctest::Approx(expect).epsilon(5e-11));
    }
  // frozen spot value at (4000, 2500): r = sqrt(1000^2 + 500^2)
  const int spot = g.cell(31, 19);  // centroid (3937.5, 2437.5)
  const double rs = std::hypot(3937.5 - 5000.0, 2437.5 - 2000.0);
  CHECK(tp[spot] == doctest::Approx(2.0 * (1.0 - rs / 2000.0)).epsilon(1e-10));
}

TEST_CASE("warm air is lighter than the column beside it") {
  Constants c;
  Grid g = build_grid(0.0, 10000.0, 0.0, 10000.0, 125.0);
  State s = init_rising_bubble(g, c, 2.0);
  // bubble centre row: the anomaly must be buoyant for the plume to rise
  const int centre = g.cell(39, 15);  // centroid (4937.5, 1937.5), r = 88 m
  const int far = g.cell(0, 15);
  CHECK(s.rho[centre] < s.rho[far]);
  CHECK(s.T[centre] > s.T[far]);
}

TEST_CASE("elliptical cold anomaly of the density-current state") {
  Constants c;
  Grid g = build_grid(0.0, 25600.0, 0.0, 6400.0, 100.0);
  State s = init_density_current(g, c, -15.0);
  Field tp = theta_perturbation(s.T, s.p, 300.0, c);
  for (int k = 0; k < g.nz; ++k)
    for (int i = 0; i < g.nx; ++i) {
      const double r =
          std::hypot(g.xc(i) / 4000.0, (g.zc(k) - 3000.0) / 2000.0);
      const double expect =
          r <= 1.0 ? -7.5 * (1.0 + std::cos(std::numbers::pi * r)) : 0.0;
      CHECK(tp[g.cell(i, k)] == doctest::Approx(expect).epsilon(5e-10));
    }
  // frozen value at (2000, 2500): r = sqrt(0.3125)
  const int spot = g.cell(19, 24);  // centroid (1950, 2450)
  const double rs = std::hypot(1950.0 / 4000.0, (2450.0 - 3000.0) / 2000.0);
  CHECK(tp[spot] ==
        doctest::Approx(-7.5 * (1.0 + std::cos(std::numbers::pi * rs)))
            .epsilon(1e-10));
  // cold air is denser: the blob must sink
  const int blob = g.cell(0, 29);  // centroid (50, 2950), near the centre
  const int aside = g.cell(200, 29);
  CHECK(s.rho[blob] > s.rho[aside]);
}

TEST_CASE("front location interpolates the rightmost threshold crossing") {
  Grid g = build_grid(0.0, 5.0, 0.0, 2.0, 1.0);
  Field tp(g.cell_count(), 0.0);
  // ground row: -3, -2, -0.5, 0, 0  -> crossing between cells 1 and 2
  tp[g.cell(0, 0)] = -3.0;
  tp[g.cell(1, 0)] = -2.0;
  tp[g.cell(2, 0)] = -0.5;
  auto f = front_location(tp, g, -1.0);
  REQUIRE(f.has_value());
  // linear interpolation: t = (-2 + 1)/(-2 + 0.5) = 2/3 from xc(1) = 1.5
  CHECK(*f == doctest::Approx(1.5 + 2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("front location picks the rightmost of several crossings") {
  Grid g = build_grid(0.0, 6.0, 0.0, 2.0, 1.0);
  Field tp(g.cell_count(), 0.0);
  double row[6] = {-2.0, 0.0, -2.0, -2.0, 0.0, 0.0};
  for (int i = 0; i < 6; ++i) tp[g.cell(i, 0)] = row[i];
  auto f = front_location(tp, g, -1.0);
  REQUIRE(f.has_value());
  // crossing between cells 3 (-2) and 4 (0): t = 1/2 from xc(3) = 3.5
  CHECK(*f == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("front location lands on an exact hit and is empty without one") {
  Grid g = build_grid(0.0, 4.0, 0.0, 2.0, 1.0);
  Field tp(g.cell_count(), 0.0);
  tp[g.cell(0, 0)] = -2.0;
  tp[g.cell(1, 0)] = -1.0;
  auto f = front_location(tp, g, -1.0);
  REQUIRE(f.has_value());
  CHECK(*f == doctest::Approx(g.xc(1)).epsilon(1e-14));
  CHECK_FALSE(front_location(Field(g.cell_count(), 0.0), g, -1.0).has_value());
  // the ground row alone decides: a crossing in an upper row does not count
  Field upper(g.cell_count(), 0.0);
  upper[g.cell(1, 1)] = -5.0;
  CHECK_FALSE(front_location(upper, g, -1.0).has_value());
}

TEST_CASE("field extrema and viscosity average") {
  Extrema e = field_extrema(Field{3.0, -1.0, 2.0});
  CHECK(e.min == -1.0);
  CHECK(e.max == 3.0);
  CHECK_THROWS_AS(field_extrema(Field{}), std::invalid_argument);

  Grid g = build_grid(0.0, 2.0, 0.0, 2.0, 1.0);
  CHECK(average_viscosity(Field{1.0, 2.0, 3.0, 4.0}, g) ==
        doctest::Approx(2.5).epsilon(1e-15));
}
