#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tailsim/rng.hpp"
#include "tailsim/terrain.hpp"

#include <cmath>

using namespace tailsim;

TEST_CASE("flat terrain") {
  const Terrain t = flat_terrain();
  CHECK(height_at(t, 3.0, -2.0) == 0.0);
  const Vec3 n = surface_normal(t, 0, 0);
  CHECK(n.z == 1.0);
  CHECK_FALSE(is_off_runway(t, {100, 100, 0}));
}

TEST_CASE("stairs height examples") {
  const Terrain t = stairs_terrain();
  CHECK(height_at(t, 0.30, 0.0) == doctest::Approx(0.05));  // second tread
  CHECK(height_at(t, -0.1, 0.0) == 0.0);
  CHECK(height_at(t, 0.0, 0.0) == doctest::Approx(0.025));
  CHECK(height_at(t, 10.0, 0.0) == doctest::Approx(0.15));  // plateau after six steps
}

TEST_CASE("stairs match the closed-form expression on random samples") {
  const Terrain t = stairs_terrain();
  Rng rng(11);
  for (int i = 0; i < 100000; ++i) {
    const double x = rng.uniform(-1.0, 3.0);
    double expected;
    if (x < 0.0) {
      expected = 0.0;
    } else {
      expected = 0.025 * std::min(std::floor(x / 0.25) + 1.0, 6.0);
    }
    CHECK(height_at(t, x, 0.0) == expected);
  }
}

TEST_CASE("stairs are monotone with 0.025 jumps at multiples of 0.25") {
  const Terrain t = stairs_terrain();
  double prev = height_at(t, -0.5, 0);
  for (double x = -0.5; x < 2.0; x += 1e-3) {
    const double h = height_at(t, x, 0);
    CHECK(h >= prev);
    CHECK(h - prev <= 0.025 + 1e-12);
    prev = h;
  }
}

TEST_CASE("incline geometry") {
  const Terrain t = incline_terrain(20.0);
  CHECK(height_at(t, 0.5, 0.0) == doctest::Approx(0.18199).epsilon(1e-4));
  CHECK(height_at(t, -0.5, 0.0) == 0.0);
  CHECK(std::isinf(height_at(t, 0.5, 0.3)));  // off the lateral edge

  const Terrain t10 = incline_terrain(10.0);
  const Vec3 n = surface_normal(t10, 0.5, 0.0);
  CHECK(n.x == doctest::Approx(-std::sin(10.0 * M_PI / 180.0)));
  CHECK(n.y == 0.0);
  CHECK(n.z == doctest::Approx(std::cos(10.0 * M_PI / 180.0)));

  CHECK(is_off_runway(t, {0.5, 0.26, 0}));
  CHECK_FALSE(is_off_runway(t, {0.5, 0.24, 0}));
  CHECK_FALSE(is_off_runway(stairs_terrain(), {0.5, 0.0, 0}));
}

TEST_CASE("heightfield determinism and statistics") {
  const Terrain t = heightfield_terrain(1234);
  CHECK(height_at(t, 0.37, -0.21) == height_at(t, 0.37, -0.21));

  const Terrain t2 = heightfield_terrain(1234);
  CHECK(height_at(t2, 1.5, 2.5) == height_at(t, 1.5, 2.5));

  Rng rng(5);
  double sum = 0.0, ss = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double h = height_at(t, rng.uniform(-5, 5), rng.uniform(-5, 5));
    sum += h;
    ss += h * h;
  }
  const double rms = std::sqrt(ss / n);
  CHECK(rms == doctest::Approx(t.heightfield.rms_amp).epsilon(0.15));
  CHECK(std::abs(sum / n) < 0.25 * t.heightfield.rms_amp);
}

TEST_CASE("degenerate heightfield is flat with vertical normals") {
  const Terrain t = heightfield_terrain(9, 0.0);
  CHECK(height_at(t, 0.3, 0.7) == 0.0);
  const Vec3 n = surface_normal(t, 0.3, 0.7);
  CHECK(n.z == doctest::Approx(1.0));
}

TEST_CASE("sphere support contact on a tread") {
  const Terrain t = stairs_terrain();
  SurfaceHit hits[2];
  // sphere resting slightly into tread 2 (height 0.05)
  const int n = collect_contacts(t, {0.30, 0.0, 0.052}, 0.004, hits);
  REQUIRE(n == 1);
  CHECK(hits[0].normal.z == 1.0);
  CHECK(hits[0].penetration == doctest::Approx(0.002));
  CHECK(hits[0].tread == 2);
  CHECK_FALSE(hits[0].riser);
}

TEST_CASE("sphere touching a riser face is pushed back") {
  const Terrain t = stairs_terrain();
  SurfaceHit hits[2];
  // approaching the riser at x = 0.25 from the lower tread, center below the
  // riser top (z in [0.025, 0.05])
  const int n = collect_contacts(t, {0.248, 0.0, 0.04}, 0.004, hits);
  REQUIRE(n >= 1);
  bool found_riser = false;
  for (int i = 0; i < n; ++i) {
    if (hits[i].riser) {
      found_riser = true;
      CHECK(hits[i].normal.x == -1.0);
      CHECK(hits[i].penetration == doctest::Approx(0.002));
    }
  }
  CHECK(found_riser);
}

TEST_CASE("sphere above the riser top passes over the edge") {
  const Terrain t = stairs_terrain();
  SurfaceHit hits[2];
  const int n = collect_contacts(t, {0.248, 0.0, 0.0504}, 0.004, hits);
  for (int i = 0; i < n; ++i) {
    CHECK_FALSE(hits[i].riser);
  }
}

TEST_CASE("support distance is signed") {
  const Terrain t = flat_terrain();
  CHECK(support_distance(t, {0, 0, 0.1}) == doctest::Approx(0.1));
  CHECK(support_distance(t, {0, 0, -0.01}) == doctest::Approx(-0.01));
}
