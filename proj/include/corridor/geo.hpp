#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "corridor/errors.hpp"

namespace corridor {

// Spherical Earth; city-scale error against a real ellipsoid is < 0.5%,
// which is immaterial for route ranking.
inline constexpr double kEarthRadiusM = 6'371'000.0;
inline constexpr double kMetersPerDegLat = kEarthRadiusM * std::numbers::pi / 180.0;

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

// WGS84 lat/lon pair, degrees. Out-of-range or non-finite values are
// rejected at construction.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  GeoPoint() = default;
  GeoPoint(double lat_deg, double lon_deg) : lat(lat_deg), lon(lon_deg) {
    if (!std::isfinite(lat) || lat < -90.0 || lat > 90.0)
      throw ValidationError("GeoPoint: latitude out of range: " + std::to_string(lat_deg));
    if (!std::isfinite(lon) || lon < -180.0 || lon > 180.0)
      throw ValidationError("GeoPoint: longitude out of range: " + std::to_string(lon_deg));
  }

  bool operator==(const GeoPoint&) const = default;
};

// Great-circle distance in meters. Symmetric bit-for-bit.
inline double haversine_distance(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = deg2rad(a.lat);
  const double phi2 = deg2rad(b.lat);
  const double dphi = deg2rad(b.lat - a.lat);
  const double dlambda = deg2rad(b.lon - a.lon);
  const double sp = std::sin(dphi / 2.0);
  const double sl = std::sin(dlambda / 2.0);
  const double h = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
  return 2.0 * kEarthRadiusM * std::atan2(std::sqrt(h), std::sqrt(std::max(0.0, 1.0 - h)));
}

// Ordered point sequence, length >= 2, no two consecutive points identical.
class Polyline {
 public:
  explicit Polyline(std::vector<GeoPoint> points) : points_(std::move(points)) {
    if (points_.size() < 2)
      throw ValidationError("Polyline: needs at least 2 points");
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (points_[i] == points_[i - 1])
        throw ValidationError("Polyline: consecutive duplicate point at index " +
                              std::to_string(i));
    }
  }

  const std::vector<GeoPoint>& points() const { return points_; }
  const GeoPoint& front() const { return points_.front(); }
  const GeoPoint& back() const { return points_.back(); }

  // Sum of haversine segment lengths.
  double length_m() const {
    double total = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i)
      total += haversine_distance(points_[i - 1], points_[i]);
    return total;
  }

  bool operator==(const Polyline&) const = default;

 private:
  std::vector<GeoPoint> points_;
};

namespace detail {

// Orientation of c relative to segment a->b in the lon/lat plane.
inline double cross(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c) {
  return (b.lon - a.lon) * (c.lat - a.lat) - (b.lat - a.lat) * (c.lon - a.lon);
}

inline bool on_segment(const GeoPoint& a, const GeoPoint& b, const GeoPoint& p) {
  if (cross(a, b, p) != 0.0) return false;
  return std::min(a.lon, b.lon) <= p.lon && p.lon <= std::max(a.lon, b.lon) &&
         std::min(a.lat, b.lat) <= p.lat && p.lat <= std::max(a.lat, b.lat);
}

// True if segments ab and cd share any point (proper or touching).
inline bool segments_intersect(const GeoPoint& a, const GeoPoint& b,
                               const GeoPoint& c, const GeoPoint& d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0.0 && on_segment(c, d, a)) return true;
  if (d2 == 0.0 && on_segment(c, d, b)) return true;
  if (d3 == 0.0 && on_segment(a, b, c)) return true;
  if (d4 == 0.0 && on_segment(a, b, d)) return true;
  return false;
}

inline void check_ring_closed(const std::vector<GeoPoint>& ring, const char* which) {
  if (ring.size() < 4)
    throw ValidationError(std::string("Polygon: ") + which + " ring needs >= 4 points");
  if (!(ring.front() == ring.back()))
    throw ValidationError(std::string("Polygon: ") + which + " ring is not closed");
}

}  // namespace detail

// Closed exterior ring plus optional interior rings (holes). The exterior
// ring is checked pairwise for self-intersection.
class Polygon {
 public:
  explicit Polygon(std::vector<GeoPoint> exterior,
                   std::vector<std::vector<GeoPoint>> holes = {})
      : exterior_(std::move(exterior)), holes_(std::move(holes)) {
    detail::check_ring_closed(exterior_, "exterior");
    for (const auto& hole : holes_) detail::check_ring_closed(hole, "interior");

    // Non-adjacent segment pairs of the exterior must not touch.
    const std::size_t n = exterior_.size() - 1;  // segment count
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
        if (adjacent) continue;
        if (detail::segments_intersect(exterior_[i], exterior_[i + 1],
                                       exterior_[j], exterior_[j + 1]))
          throw ValidationError("Polygon: exterior ring self-intersects (segments " +
                                std::to_string(i) + " and " + std::to_string(j) + ")");
      }
    }
  }

  const std::vector<GeoPoint>& exterior() const { return exterior_; }
  const std::vector<std::vector<GeoPoint>>& holes() const { return holes_; }

  bool operator==(const Polygon&) const = default;

 private:
  std::vector<GeoPoint> exterior_;
  std::vector<std::vector<GeoPoint>> holes_;
};

namespace detail {

// Even-odd ray cast over a closed ring; boundary not handled here.
inline bool ray_cast(const GeoPoint& p, const std::vector<GeoPoint>& ring) {
  bool inside = false;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[i + 1];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x = (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

inline bool on_ring_boundary(const GeoPoint& p, const std::vector<GeoPoint>& ring) {
  for (std::size_t i = 0; i + 1 < ring.size(); ++i)
    if (on_segment(ring[i], ring[i + 1], p)) return true;
  return false;
}

}  // namespace detail

// Planar ray-casting membership at city scale. Boundary points count as
// inside (ties resolve toward admitting); interior rings subtract.
inline bool point_in_polygon(const GeoPoint& p, const Polygon& poly) {
  if (detail::on_ring_boundary(p, poly.exterior())) return true;
  for (const auto& hole : poly.holes())
    if (detail::on_ring_boundary(p, hole)) return true;
  if (!detail::ray_cast(p, poly.exterior())) return false;
  for (const auto& hole : poly.holes())
    if (detail::ray_cast(p, hole)) return false;
  return true;
}

// Result of projecting a point onto a polyline: minimum distance and the
// arc-length position of the nearest point, measured from the start.
struct PolylineProjection {
  double distance_m = 0.0;
  double along_m = 0.0;
};

namespace detail {

// Point-to-segment distance treating the segment as planar with
// haversine-scaled axes anchored at the segment start. Error < 0.1% for
// segments under 5 km. Returns (distance, clamp parameter t in [0,1]).
struct SegmentProjection {
  double distance_m;
  double t;
};

inline SegmentProjection project_to_segment(const GeoPoint& p, const GeoPoint& a,
                                            const GeoPoint& b) {
  const double k_lon = kMetersPerDegLat * std::cos(deg2rad(a.lat));
  const double px = (p.lon - a.lon) * k_lon;
  const double py = (p.lat - a.lat) * kMetersPerDegLat;
  const double bx = (b.lon - a.lon) * k_lon;
  const double by = (b.lat - a.lat) * kMetersPerDegLat;
  const double len2 = bx * bx + by * by;
  double t = len2 > 0.0 ? (px * bx + py * by) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = px - t * bx;
  const double dy = py - t * by;
  return {std::sqrt(dx * dx + dy * dy), t};
}

}  // namespace detail

// Minimum distance and along-route position over all segments. Arc length
// accumulates haversine segment lengths; ties keep the earliest segment.
inline PolylineProjection project_to_polyline(const GeoPoint& p, const Polyline& line) {
  const auto& pts = line.points();
  PolylineProjection best{std::numeric_limits<double>::infinity(), 0.0};
  double along_prefix = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double seg_len = haversine_distance(pts[i], pts[i + 1]);
    const auto proj = detail::project_to_segment(p, pts[i], pts[i + 1]);
    if (proj.distance_m < best.distance_m) {
      best.distance_m = proj.distance_m;
      best.along_m = along_prefix + proj.t * seg_len;
    }
    along_prefix += seg_len;
  }
  return best;
}

inline double distance_point_to_polyline(const GeoPoint& p, const Polyline& line) {
  return project_to_polyline(p, line).distance_m;
}

// Axis-aligned lat/lon bounds.
struct BoundingBox {
  double min_lat = std::numeric_limits<double>::infinity();
  double min_lon = std::numeric_limits<double>::infinity();
  double max_lat = -std::numeric_limits<double>::infinity();
  double max_lon = -std::numeric_limits<double>::infinity();

  bool empty() const { return min_lat > max_lat; }

  void expand(const GeoPoint& p) {
    min_lat = std::min(min_lat, p.lat);
    min_lon = std::min(min_lon, p.lon);
    max_lat = std::max(max_lat, p.lat);
    max_lon = std::max(max_lon, p.lon);
  }

  void expand(const BoundingBox& other) {
    if (other.empty()) return;
    min_lat = std::min(min_lat, other.min_lat);
    min_lon = std::min(min_lon, other.min_lon);
    max_lat = std::max(max_lat, other.max_lat);
    max_lon = std::max(max_lon, other.max_lon);
  }

  bool contains(const GeoPoint& p) const {
    return !empty() && p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon &&
           p.lon <= max_lon;
  }

  bool operator==(const BoundingBox&) const = default;
};

inline BoundingBox bounds_of(const Polyline& line) {
  BoundingBox box;
  for (const auto& p : line.points()) box.expand(p);
  return box;
}

inline BoundingBox bounds_of(const Polygon& poly) {
  BoundingBox box;
  for (const auto& p : poly.exterior()) box.expand(p);
  return box;
}

}  // namespace corridor
