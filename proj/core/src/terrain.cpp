#include "tailsim/terrain.hpp"

#include "tailsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tailsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Cosine-interpolated lattice noise. Lattice values are uniform with
// std rms/0.75; the interpolation weights shrink the sample RMS by
// exactly 3/4 in 2D, so samples come out at the configured RMS.
double field_height(const HeightfieldSpec& hf, double x, double y) {
  if (hf.rms_amp == 0.0 || hf.corr_len <= 0.0) {
    return 0.0;
  }
  const double scale = hf.rms_amp / 0.75 * 1.7320508075688772;  // sqrt(3): uniform -> unit std
  const double u = x / hf.corr_len;
  const double v = y / hf.corr_len;
  const auto ix = static_cast<std::int64_t>(std::floor(u));
  const auto iy = static_cast<std::int64_t>(std::floor(v));
  const double fx = u - static_cast<double>(ix);
  const double fy = v - static_cast<double>(iy);
  const double sx = 0.5 * (1.0 - std::cos(kPi * fx));
  const double sy = 0.5 * (1.0 - std::cos(kPi * fy));

  const double v00 = lattice_noise(hf.seed, ix, iy);
  const double v10 = lattice_noise(hf.seed, ix + 1, iy);
  const double v01 = lattice_noise(hf.seed, ix, iy + 1);
  const double v11 = lattice_noise(hf.seed, ix + 1, iy + 1);

  const double a = v00 + (v10 - v00) * sx;
  const double b = v01 + (v11 - v01) * sx;
  return scale * (a + (b - a) * sy);
}

}  // namespace

Terrain flat_terrain() {
  Terrain t;
  t.variant = TerrainVariant::Flat;
  t.material.mu = 0.45;
  return t;
}

Terrain incline_terrain(double angle_deg) {
  Terrain t;
  t.variant = TerrainVariant::Incline;
  t.incline.angle_deg = angle_deg;
  t.material.mu = 0.40;  // cardboard runway
  return t;
}

Terrain stairs_terrain() {
  Terrain t;
  t.variant = TerrainVariant::Stairs;
  t.material.mu = 0.55;  // foam board treads
  return t;
}

Terrain heightfield_terrain(std::uint64_t seed, double rms_amp, double corr_len) {
  Terrain t;
  t.variant = TerrainVariant::Heightfield;
  t.heightfield.seed = seed;
  t.heightfield.rms_amp = rms_amp;
  t.heightfield.corr_len = corr_len;
  t.material.mu = 0.6;  // pebbles
  return t;
}

double height_at(const Terrain& terrain, double x, double y) {
  switch (terrain.variant) {
    case TerrainVariant::Flat:
      return 0.0;
    case TerrainVariant::Incline: {
      if (x <= 0.0) {
        return 0.0;
      }
      if (std::abs(y) > terrain.incline.half_width) {
        return kNegInf;  // off the runway edge
      }
      return std::tan(terrain.incline.angle_deg * kPi / 180.0) * x;
    }
    case TerrainVariant::Stairs: {
      if (x < 0.0) {
        return 0.0;
      }
      const auto step = static_cast<int>(std::floor(x / terrain.stairs.run)) + 1;
      return terrain.stairs.rise * std::min(step, terrain.stairs.count);
    }
    case TerrainVariant::Heightfield:
      return field_height(terrain.heightfield, x, y);
  }
  return 0.0;
}

Vec3 surface_normal(const Terrain& terrain, double x, double y) {
  switch (terrain.variant) {
    case TerrainVariant::Flat:
    case TerrainVariant::Stairs:
      return {0.0, 0.0, 1.0};
    case TerrainVariant::Incline: {
      if (x <= 0.0) {
        return {0.0, 0.0, 1.0};
      }
      const double a = terrain.incline.angle_deg * kPi / 180.0;
      return {-std::sin(a), 0.0, std::cos(a)};
    }
    case TerrainVariant::Heightfield: {
      const double h = 1.0e-3;
      const double dzdx =
          (field_height(terrain.heightfield, x + h, y) - field_height(terrain.heightfield, x - h, y)) /
          (2.0 * h);
      const double dzdy =
          (field_height(terrain.heightfield, x, y + h) - field_height(terrain.heightfield, x, y - h)) /
          (2.0 * h);
      return Vec3{-dzdx, -dzdy, 1.0}.normalized();
    }
  }
  return {0.0, 0.0, 1.0};
}

bool is_off_runway(const Terrain& terrain, const Vec3& position) {
  switch (terrain.variant) {
    case TerrainVariant::Incline:
      return position.x > 0.0 && std::abs(position.y) > terrain.incline.half_width;
    case TerrainVariant::Stairs:
      return std::abs(position.y) > terrain.stairs.half_width;
    default:
      return false;
  }
}

int tread_index(const Terrain& terrain, double x) {
  if (terrain.variant != TerrainVariant::Stairs || x < 0.0) {
    return 0;
  }
  const auto step = static_cast<int>(std::floor(x / terrain.stairs.run)) + 1;
  return std::min(step, terrain.stairs.count);
}

double incline_end_x(const Terrain& terrain) {
  const double a = terrain.incline.angle_deg * kPi / 180.0;
  return terrain.incline.length * std::cos(a);
}

double support_distance(const Terrain& terrain, const Vec3& point, Vec3* normal, int* tread) {
  const double h = height_at(terrain, point.x, point.y);
  Vec3 n{0.0, 0.0, 1.0};
  double dist;
  if (!std::isfinite(h)) {
    dist = std::numeric_limits<double>::infinity();
  } else if (terrain.variant == TerrainVariant::Incline && point.x > 0.0) {
    const double a = terrain.incline.angle_deg * kPi / 180.0;
    n = {-std::sin(a), 0.0, std::cos(a)};
    dist = point.dot(n);  // slope plane passes through the origin
  } else if (terrain.variant == TerrainVariant::Heightfield) {
    n = surface_normal(terrain, point.x, point.y);
    dist = (point.z - h) * n.z;
  } else {
    dist = point.z - h;
  }
  if (normal) *normal = n;
  if (tread) *tread = tread_index(terrain, point.x);
  return dist;
}

int collect_contacts(const Terrain& terrain, const Vec3& center, double radius,
                     SurfaceHit* out) {
  int n = 0;

  // Support contact against the surface under the sphere.
  Vec3 normal;
  int tread = 0;
  const double dist = support_distance(terrain, center, &normal, &tread);
  if (std::isfinite(dist)) {
    const double pen = radius - dist;
    if (pen > 0.0) {
      out[n].point = center - normal * radius;
      out[n].normal = normal;
      out[n].penetration = pen;
      out[n].tread = tread;
      ++n;
    }
  }

  // Riser faces on stairs act as thin vertical penalty planes so feet and
  // the tail can snag on step edges.
  if (terrain.variant == TerrainVariant::Stairs) {
    const auto& st = terrain.stairs;
    for (int k = 1; k <= st.count; ++k) {
      const double face_x = st.run * static_cast<double>(k - 1);
      const double top_z = st.rise * static_cast<double>(k);
      const double bottom_z = st.rise * static_cast<double>(k - 1);
      if (center.x > face_x || center.x < face_x - radius) {
        continue;
      }
      if (center.z >= top_z || center.z < bottom_z - radius) {
        continue;
      }
      const double pen = radius - (face_x - center.x);
      if (pen > 0.0) {
        out[n].point = {face_x, center.y, center.z};
        out[n].normal = {-1.0, 0.0, 0.0};
        out[n].penetration = pen;
        out[n].tread = tread_index(terrain, center.x);
        out[n].riser = true;
        ++n;
        break;  // at most one riser within a sphere radius
      }
    }
  }
  return n;
}

}  // namespace tailsim
