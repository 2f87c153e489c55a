#pragma once

// Torus arithmetic, canonical detectable regions and their geometric
// descriptors.
//
// Targets are stored already inflated by the detection radius d: a Ball is
// the detectable ball itself, a Line is the set of points within d of a
// segment, a Disc is a slab of half-thickness d, and a Rect is a rectangle
// extruded to total thickness d.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>

#include "error.hpp"
#include "random.hpp"
#include "vec3.hpp"

namespace levy3d {

// ---------------------------------------------------------------------------
// Torus

/// Half the side of the cubic torus of volume n.
inline double torus_half_width(double volume) {
    detail::require(std::isfinite(volume) && volume > 0.0, "torus volume must be positive");
    return std::cbrt(volume) / 2.0;
}

namespace detail {

inline double wrap_coord(double x, double half_width) {
    const double period = 2.0 * half_width;
    double w = x - period * std::floor((x + half_width) / period);
    // floor() can land one ulp outside the half-open cell.
    if (w >= half_width) {
        w -= period;
    }
    if (w < -half_width) {
        w += period;
    }
    return w;
}

}  // namespace detail

/// A position on the torus [-h, h)^3. Always normalized.
class TorusPoint {
public:
    TorusPoint(const Vec3& raw, double half_width) : half_width_(half_width) {
        detail::require(std::isfinite(half_width) && half_width > 0.0, "half_width must be positive");
        detail::require(is_finite(raw), "torus coordinates must be finite");
        pos_ = {detail::wrap_coord(raw.x, half_width), detail::wrap_coord(raw.y, half_width),
                detail::wrap_coord(raw.z, half_width)};
    }

    const Vec3& position() const { return pos_; }
    double x() const { return pos_.x; }
    double y() const { return pos_.y; }
    double z() const { return pos_.z; }
    double half_width() const { return half_width_; }

    /// Moves by `v` and wraps.
    TorusPoint moved(const Vec3& v) const { return TorusPoint(pos_ + v, half_width_); }

    friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

private:
    Vec3 pos_;
    double half_width_;
};

inline TorusPoint wrap(const Vec3& p, double half_width) { return TorusPoint(p, half_width); }

/// Minimum-image difference a - b.
inline Vec3 torus_displacement(const TorusPoint& a, const TorusPoint& b) {
    detail::require(a.half_width() == b.half_width(), "torus_displacement: mismatched half_width");
    const double h = a.half_width();
    const Vec3 d = a.position() - b.position();
    return {detail::wrap_coord(d.x, h), detail::wrap_coord(d.y, h), detail::wrap_coord(d.z, h)};
}

inline double torus_distance(const TorusPoint& a, const TorusPoint& b) {
    return norm(torus_displacement(a, b));
}

// ---------------------------------------------------------------------------
// Shapes

enum class Axis : std::uint8_t { x = 0, y = 1, z = 2 };

inline constexpr std::size_t index_of(Axis a) { return static_cast<std::size_t>(a); }

struct Ball {
    double radius;
};

/// Slab of radius `radius` and total thickness 2 * half_thickness.
struct Disc {
    double radius;
    double half_thickness;
};

/// Points within `radius` of a segment of the given length.
struct Line {
    double length;
    double radius;
};

/// a x b rectangle extruded to `thickness` along the normal.
struct Rect {
    double side_a;
    double side_b;
    double thickness;
};

using Shape = std::variant<Ball, Disc, Line, Rect>;

enum class ShapeKind : std::uint8_t { ball, disc, line, rect };

inline std::string_view to_string(ShapeKind k) {
    switch (k) {
        case ShapeKind::ball: return "ball";
        case ShapeKind::disc: return "disc";
        case ShapeKind::line: return "line";
        case ShapeKind::rect: return "rect";
    }
    return "?";
}

inline ShapeKind parse_shape_kind(std::string_view s) {
    if (s == "ball") return ShapeKind::ball;
    if (s == "disc" || s == "disk") return ShapeKind::disc;
    if (s == "line") return ShapeKind::line;
    if (s == "rect") return ShapeKind::rect;
    throw InvalidInput("unknown shape '" + std::string(s) + "' (expected ball|disc|line|rect)");
}

/// A detectable region centered on the torus. For Disc and Rect the axis is
/// the normal; for Line it is the segment direction. Rect side_a runs along
/// axis+1 and side_b along axis+2 (cyclically).
class Target {
public:
    static Target ball(double radius, double d = 1.0, Vec3 center = {}, Axis axis = Axis::z) {
        detail::require(std::isfinite(radius) && radius > 0.0, "ball radius must be positive");
        detail::require(radius >= d, "ball radius must be at least the detection radius");
        return Target(Ball{radius}, d, center, axis);
    }
    static Target disc(double radius, double d = 1.0, Vec3 center = {}, Axis axis = Axis::z) {
        detail::require(std::isfinite(radius) && radius > 0.0, "disc radius must be positive");
        return Target(Disc{radius, d}, d, center, axis);
    }
    static Target line(double length, double d = 1.0, Vec3 center = {}, Axis axis = Axis::x) {
        detail::require(std::isfinite(length) && length > 0.0, "line length must be positive");
        return Target(Line{length, d}, d, center, axis);
    }
    static Target rect(double side_a, double side_b, double d = 1.0, Vec3 center = {},
                       Axis axis = Axis::z) {
        detail::require(std::isfinite(side_a) && side_a > 0.0 && std::isfinite(side_b) && side_b > 0.0,
                        "rect sides must be positive");
        return Target(Rect{side_a, side_b, d}, d, center, axis);
    }

    const Shape& shape() const { return shape_; }
    ShapeKind kind() const { return static_cast<ShapeKind>(shape_.index()); }
    const Vec3& center() const { return center_; }
    Axis axis() const { return axis_; }
    double detection_radius() const { return d_; }

    Target with_center(const Vec3& c) const {
        Target t = *this;
        t.center_ = c;
        return t;
    }
    Target with_axis(Axis a) const {
        Target t = *this;
        t.axis_ = a;
        return t;
    }

    /// Half extents in the shape frame: (axial, first transverse, second transverse).
    std::array<double, 3> local_half_extents() const {
        return std::visit(
            [](const auto& s) -> std::array<double, 3> {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, Ball>) {
                    return {s.radius, s.radius, s.radius};
                } else if constexpr (std::is_same_v<S, Disc>) {
                    return {s.half_thickness, s.radius, s.radius};
                } else if constexpr (std::is_same_v<S, Line>) {
                    return {s.length / 2.0 + s.radius, s.radius, s.radius};
                } else {
                    return {s.thickness / 2.0, s.side_a / 2.0, s.side_b / 2.0};
                }
            },
            shape_);
    }

    /// Half extents along the world x, y, z axes.
    Vec3 half_extents() const {
        const auto local = local_half_extents();
        Vec3 out;
        const std::size_t u = index_of(axis_);
        out[u] = local[0];
        out[(u + 1) % 3] = local[1];
        out[(u + 2) % 3] = local[2];
        return out;
    }

    /// Membership for a displacement `r` from the center (not wrapped).
    bool contains_local(const Vec3& r) const {
        const std::size_t u = index_of(axis_);
        const double axial = r[u];
        const double t1 = r[(u + 1) % 3];
        const double t2 = r[(u + 2) % 3];
        return std::visit(
            [&](const auto& s) -> bool {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, Ball>) {
                    return dot(r, r) <= s.radius * s.radius;
                } else if constexpr (std::is_same_v<S, Disc>) {
                    return std::abs(axial) <= s.half_thickness && t1 * t1 + t2 * t2 <= s.radius * s.radius;
                } else if constexpr (std::is_same_v<S, Line>) {
                    const double half = s.length / 2.0;
                    const double excess = axial - std::clamp(axial, -half, half);
                    return excess * excess + t1 * t1 + t2 * t2 <= s.radius * s.radius;
                } else {
                    return std::abs(axial) <= s.thickness / 2.0 && std::abs(t1) <= s.side_a / 2.0 &&
                           std::abs(t2) <= s.side_b / 2.0;
                }
            },
            shape_);
    }

    /// True when the region does not overlap itself through the periodic
    /// boundary. A ball reaching every point of the torus (radius at least
    /// half_width * sqrt(3)) is accepted as the degenerate whole-torus target.
    bool fits(double half_width) const {
        if (const auto* b = std::get_if<Ball>(&shape_); b && b->radius >= half_width * std::numbers::sqrt3) {
            return true;
        }
        const Vec3 e = half_extents();
        return e.x < half_width && e.y < half_width && e.z < half_width;
    }

private:
    Target(Shape shape, double d, Vec3 center, Axis axis) : shape_(shape), center_(center), axis_(axis), d_(d) {
        detail::require(std::isfinite(d) && d >= 1.0, "detection radius must be >= 1");
        detail::require(is_finite(center), "target center must be finite");
    }

    Shape shape_;
    Vec3 center_;
    Axis axis_;
    double d_;
};

/// Detection test: is `p` inside the target, using the minimum image.
inline bool contains(const Target& t, const TorusPoint& p) {
    const TorusPoint c(t.center(), p.half_width());
    return t.contains_local(torus_displacement(p, c));
}

// ---------------------------------------------------------------------------
// Descriptors

inline constexpr double kApproxConvexThreshold = 1.0 / 36.0;

struct GeoDescriptors {
    double volume = 0.0;
    double surface_area = 0.0;
    double largest_face_area = 0.0;  // Delta_B
    double projected_area = 0.0;     // Delta_P
    double elongation = 0.0;         // delta, longest box side = Delta_B^delta
    std::array<double, 3> box_sides{};  // ascending
    bool approx_convex = false;
};

namespace detail {

inline GeoDescriptors finish_descriptors(double volume, double surface, std::array<double, 3> box,
                                         std::array<double, 3> projections) {
    std::sort(box.begin(), box.end());
    GeoDescriptors g;
    g.volume = volume;
    g.surface_area = surface;
    g.box_sides = box;
    g.largest_face_area = box[1] * box[2];
    g.projected_area = *std::max_element(projections.begin(), projections.end());
    require(g.largest_face_area > 1.0, "largest face area must exceed 1 for the elongation to be defined");
    g.elongation = std::log(box[2]) / std::log(g.largest_face_area);
    g.approx_convex = g.projected_area / g.largest_face_area >= kApproxConvexThreshold;
    return g;
}

}  // namespace detail

/// Closed-form descriptors of a canonical target. The box is the axis-aligned
/// one, which is the minimal-surface box for all four shapes.
inline GeoDescriptors descriptors(const Target& t) {
    using std::numbers::pi;
    return std::visit(
        [](const auto& s) -> GeoDescriptors {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Ball>) {
                const double r = s.radius;
                const double proj = pi * r * r;
                return detail::finish_descriptors(4.0 / 3.0 * pi * r * r * r, 4.0 * pi * r * r,
                                                  {2 * r, 2 * r, 2 * r}, {proj, proj, proj});
            } else if constexpr (std::is_same_v<S, Disc>) {
                const double r = s.radius;
                const double h = s.half_thickness;
                const double side = 2 * r * 2 * h;
                return detail::finish_descriptors(pi * r * r * 2 * h, 2 * pi * r * r + 2 * pi * r * 2 * h,
                                                  {2 * r, 2 * r, 2 * h}, {pi * r * r, side, side});
            } else if constexpr (std::is_same_v<S, Line>) {
                const double l = s.length;
                const double r = s.radius;
                const double side = 2 * r * l + pi * r * r;
                return detail::finish_descriptors(pi * r * r * l + 4.0 / 3.0 * pi * r * r * r,
                                                  2 * pi * r * l + 4 * pi * r * r, {l + 2 * r, 2 * r, 2 * r},
                                                  {pi * r * r, side, side});
            } else {
                const double a = s.side_a;
                const double b = s.side_b;
                const double t = s.thickness;
                return detail::finish_descriptors(a * b * t, 2 * (a * b + a * t + b * t), {a, b, t},
                                                  {a * b, b * t, a * t});
            }
        },
        t.shape());
}

// ---------------------------------------------------------------------------
// Counterexample: two orthogonal segments

/// Two segments of length `arm_length` crossing at their midpoints in the
/// xy-plane, each thickened to total thickness `thickness`. Its projected
/// area grows like L while its largest box face grows like L^2.
struct OrthogonalCross {
    double arm_length;
    double thickness;

    Vec3 half_extents() const {
        const double r = thickness / 2.0;
        return {arm_length / 2.0 + r, arm_length / 2.0 + r, r};
    }

    bool contains_local(const Vec3& p) const {
        const double r = thickness / 2.0;
        const double half = arm_length / 2.0;
        const double ex = p.x - std::clamp(p.x, -half, half);
        const double ey = p.y - std::clamp(p.y, -half, half);
        return ex * ex + p.y * p.y + p.z * p.z <= r * r || p.x * p.x + ey * ey + p.z * p.z <= r * r;
    }

    /// Projection onto the xy face: two stadia overlapping in a square.
    double projected_area() const {
        const double r = thickness / 2.0;
        return 2.0 * (2.0 * r * arm_length + std::numbers::pi * r * r) - 4.0 * r * r;
    }

    double largest_face_area() const {
        const double side = arm_length + thickness;
        return side * side;
    }
};

/// Delta_P / Delta_B of the crossed-segments shape whose arms have
/// thickness d. Decreases like 2d/L; largest at L = 2d.
inline double counterexample_ratio(double arm_length, double d) {
    detail::require(std::isfinite(d) && d > 0.0, "counterexample_ratio: d must be positive");
    detail::require(arm_length >= 2.0 * d, "counterexample_ratio: need L >= 2d");
    const OrthogonalCross cross{arm_length, d};
    return cross.projected_area() / cross.largest_face_area();
}

// ---------------------------------------------------------------------------
// Monte Carlo projected area

template <class R>
concept LocalRegion = requires(const R& r, const Vec3& v) {
    { r.contains_local(v) } -> std::convertible_to<bool>;
    { r.half_extents() } -> std::convertible_to<Vec3>;
};

struct AreaEstimate {
    double area = 0.0;
    double std_error = 0.0;
    Axis normal = Axis::z;
};

/// Estimates the area of the region's silhouette projected along `normal` by
/// sampling the bounding-box face uniformly and ray-marching each sample
/// through the region. Marching uses `march_points` probes per ray.
template <LocalRegion R>
AreaEstimate mc_projected_area_along(const R& region, Axis normal, std::size_t samples, std::uint64_t seed,
                                     std::size_t march_points = 512) {
    detail::require(samples >= 10000, "mc_projected_area: need at least 1e4 samples");
    detail::require(march_points >= 2, "mc_projected_area: need at least 2 probes per ray");
    const Vec3 e = region.half_extents();
    const std::size_t n = index_of(normal);
    const std::size_t u = (n + 1) % 3;
    const std::size_t v = (n + 2) % 3;
    const double face = 4.0 * e[u] * e[v];
    const double step = 2.0 * e[n] / static_cast<double>(march_points - 1);

    Rng rng(seed);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        Vec3 p;
        p[u] = (2.0 * uniform01(rng) - 1.0) * e[u];
        p[v] = (2.0 * uniform01(rng) - 1.0) * e[v];
        for (std::size_t k = 0; k < march_points; ++k) {
            p[n] = -e[n] + step * static_cast<double>(k);
            if (region.contains_local(p)) {
                ++hits;
                break;
            }
        }
    }
    const double frac = static_cast<double>(hits) / static_cast<double>(samples);
    return {face * frac, face * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples)), normal};
}

/// Silhouette area on the largest bounding-box face (normal along the
/// shortest box side; ties resolved toward x).
template <LocalRegion R>
AreaEstimate mc_projected_area(const R& region, std::size_t samples, std::uint64_t seed) {
    const Vec3 e = region.half_extents();
    Axis normal = Axis::x;
    if (e.y < e[index_of(normal)]) normal = Axis::y;
    if (e.z < e[index_of(normal)]) normal = Axis::z;
    return mc_projected_area_along(region, normal, samples, seed);
}

}  // namespace levy3d
