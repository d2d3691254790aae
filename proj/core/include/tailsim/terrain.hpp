#pragma once

// Height-queryable terrain variants matching the test environments: flat
// ground, a bounded inclined runway, six uniform steps, and a pseudo-random
// heightfield standing in for pebbled outdoor ground.

#include "tailsim/contact.hpp"
#include "tailsim/math.hpp"

#include <cstdint>

namespace tailsim {

enum class TerrainVariant { Flat, Incline, Stairs, Heightfield };

struct InclineSpec {
  double angle_deg = 15.0;   // in [0, 45]
  double length = 0.85;      // m, along the slope
  double half_width = 0.25;  // m
};

struct StairsSpec {
  int count = 6;
  double rise = 0.025;      // m
  double run = 0.25;        // m
  double half_width = 0.25; // m, lateral extent of the track
};

struct HeightfieldSpec {
  std::uint64_t seed = 1;
  double rms_amp = 0.012; // m
  double corr_len = 0.04; // m
};

struct Terrain {
  TerrainVariant variant = TerrainVariant::Flat;
  InclineSpec incline;
  StairsSpec stairs;
  HeightfieldSpec heightfield;
  Material material;
};

Terrain flat_terrain();
Terrain incline_terrain(double angle_deg);
Terrain stairs_terrain();
Terrain heightfield_terrain(std::uint64_t seed, double rms_amp = 0.012, double corr_len = 0.04);

// Ground height under (x, y). Returns -inf off the lateral edge of the
// incline runway (nothing to stand on there).
double height_at(const Terrain& terrain, double x, double y);

// Outward surface normal at (x, y). Stair treads are locally flat; riser
// faces are handled separately during contact generation.
Vec3 surface_normal(const Terrain& terrain, double x, double y);

// True when a CoM at `position` has left the runway/track footprint
// laterally. Always false for Flat and Heightfield.
bool is_off_runway(const Terrain& terrain, const Vec3& position);

// Stairs tread index at x: 0 before the first riser, 1..count on the steps,
// count on the plateau. Returns 0 for terrains without steps.
int tread_index(const Terrain& terrain, double x);

// Along-slope coordinate of the incline runway end, expressed as the world
// x where the runway ends (runway length measured on the slope).
double incline_end_x(const Terrain& terrain);

struct SurfaceHit {
  Vec3 point;        // world contact point
  Vec3 normal;       // unit, away from the surface
  double penetration = 0.0;
  int tread = 0;     // stairs tread index at the contact, else 0
  bool riser = false;  // true for stair riser-face hits
};

// Signed distance from a point to the supporting surface along its normal
// (negative = below the surface). +inf past the incline runway edge.
double support_distance(const Terrain& terrain, const Vec3& point, Vec3* normal = nullptr,
                        int* tread = nullptr);

// Collects penalty contacts for a sphere against the terrain. At most one
// support contact plus, on stairs, one riser-face contact. Returns the
// number of hits written to `out` (capacity >= 2).
int collect_contacts(const Terrain& terrain, const Vec3& center, double radius,
                     SurfaceHit* out);

}  // namespace tailsim
