#pragma once

// Leaf-shaped radiator outline: a half-ellipse base joined to an
// interpolating Bézier tip, rotated and mirrored into a two-element pair.
//
// Local frame of one leaf (all lengths mm), before rotation:
//
//            y
//            |      . - - - - .  (tip_samples[0] = (a, b))
//            |   .              ` .
//   petiole  o ----------------------- * tip ---> x (leaf axis)
//    (0,0)   |   .              . `
//            |      ` - - - - '       (mirror of the tip curve)
//            |<--a-->|
//
// The base is the petiole-side half of an ellipse centred at (a, 0); the
// upper edge from (a, b) to the tip follows the sampled points and the lower
// edge is its mirror image across the leaf axis. The outline is rotated by
// rotation_deg (counter-clockwise) about the petiole, shifted right by half
// the feed gap, and the second element is its reflection across x = 0.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "leafmatch/errors.hpp"

namespace leafmatch::leafgeom {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point2&) const = default;
};

struct Polyline {
    std::vector<Point2> points;
    bool closed = false;  // closed outlines do not repeat the first point
};

struct Envelope {
    double width = 100.0;
    double height = 80.0;
};

struct LeafProfile {
    double semi_major = 0.0;  // along the leaf axis
    double semi_minor = 0.0;
    std::vector<Point2> tip_samples;
    double rotation_deg = 45.0;
    bool mirrored_pair = true;
    double feed_gap = 8.0;
    int points_per_segment = 128;
    Envelope envelope;
};

struct LeafPair {
    Polyline element_a;
    std::optional<Polyline> element_b;  // present when the profile is mirrored
    Point2 feed_a;
    std::optional<Point2> feed_b;
};

struct OutlineMetrics {
    double area = 0.0;
    double perimeter = 0.0;
    double width = 0.0;
    double height = 0.0;
};

/// Shipped default: a plausible leaf, not measured data. Fits the 100 × 80 mm board.
inline LeafProfile default_profile() {
    LeafProfile p;
    p.semi_major = 16.0;
    p.semi_minor = 13.0;
    p.tip_samples = {{16.0, 13.0}, {28.0, 14.5}, {40.0, 12.0}, {51.0, 6.5}, {60.0, 0.0}};
    return p;
}

/// (a·cosθ, b·sinθ) for n+1 values of θ uniform on [−π/2, π/2].
inline Polyline half_ellipse(double a, double b, int n) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("ellipse semi-axes must be positive");
    }
    if (n < 8) throw DomainError("half ellipse needs n >= 8");
    Polyline out;
    out.points.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        if (i == 0) {
            out.points.push_back({0.0, -b});
        } else if (i == n) {
            out.points.push_back({0.0, b});
        } else if (2 * i == n) {
            out.points.push_back({a, 0.0});
        } else if (2 * i > n) {
            // Upper half mirrors the lower half so the outline is exactly symmetric.
            const Point2 q = out.points[static_cast<std::size_t>(n - i)];
            out.points.push_back({q.x, -q.y});
        } else {
            const double theta = -std::numbers::pi / 2 + std::numbers::pi * i / n;
            out.points.push_back({a * std::cos(theta), b * std::sin(theta)});
        }
    }
    return out;
}

/// Composite cubic Bézier through every sample, tangents from Catmull-Rom
/// (one-sided at the ends). n points per segment plus the final sample.
inline Polyline tip_curve(const std::vector<Point2>& samples, int n) {
    if (samples.size() < 2) throw DomainError("tip curve needs at least 2 samples");
    if (n < 8) throw DomainError("tip curve needs n >= 8");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i].x) || !std::isfinite(samples[i].y)) throw DomainError("non-finite sample");
        if (i > 0 && std::hypot(samples[i].x - samples[i - 1].x, samples[i].y - samples[i - 1].y) < 1e-12) {
            throw DomainError("duplicate consecutive tip samples at index " + std::to_string(i));
        }
    }
    const std::size_t m = samples.size();
    std::vector<Point2> tangent(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Point2& prev = samples[i == 0 ? 0 : i - 1];
        const Point2& next = samples[i + 1 == m ? m - 1 : i + 1];
        const double scale = (i == 0 || i + 1 == m) ? 1.0 : 0.5;
        tangent[i] = {scale * (next.x - prev.x), scale * (next.y - prev.y)};
    }
    Polyline out;
    out.points.reserve((m - 1) * static_cast<std::size_t>(n) + 1);
    for (std::size_t s = 0; s + 1 < m; ++s) {
        const Point2 p0 = samples[s];
        const Point2 p3 = samples[s + 1];
        const Point2 p1{p0.x + tangent[s].x / 3.0, p0.y + tangent[s].y / 3.0};
        const Point2 p2{p3.x - tangent[s + 1].x / 3.0, p3.y - tangent[s + 1].y / 3.0};
        for (int j = 0; j < n; ++j) {
            const double t = static_cast<double>(j) / n;
            const double u = 1.0 - t;
            const double w0 = u * u * u, w1 = 3 * u * u * t, w2 = 3 * u * t * t, w3 = t * t * t;
            out.points.push_back({w0 * p0.x + w1 * p1.x + w2 * p2.x + w3 * p3.x,
                                  w0 * p0.y + w1 * p1.y + w2 * p2.y + w3 * p3.y});
        }
    }
    out.points.push_back(samples.back());
    return out;
}

namespace detail {

inline double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline int sign(double v) { return (v > 0) - (v < 0); }

inline bool on_segment(const Point2& p, const Point2& q, const Point2& r) {
    return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) && std::min(p.y, r.y) <= q.y &&
           q.y <= std::max(p.y, r.y);
}

inline bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& p3, const Point2& p4) {
    const int d1 = sign(cross(p3, p4, p1));
    const int d2 = sign(cross(p3, p4, p2));
    const int d3 = sign(cross(p1, p2, p3));
    const int d4 = sign(cross(p1, p2, p4));
    if (d1 * d2 < 0 && d3 * d4 < 0) return true;
    if (d1 == 0 && on_segment(p3, p1, p4)) return true;
    if (d2 == 0 && on_segment(p3, p2, p4)) return true;
    if (d3 == 0 && on_segment(p1, p3, p2)) return true;
    if (d4 == 0 && on_segment(p1, p4, p2)) return true;
    return false;
}

inline Point2 rotate(const Point2& p, double degrees) {
    const double r = degrees * std::numbers::pi / 180.0;
    const double c = std::cos(r), s = std::sin(r);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

}  // namespace detail

/// First pair of crossing, non-adjacent segments of a closed polyline, if any.
inline std::optional<std::pair<std::size_t, std::size_t>> find_self_intersection(const Polyline& poly) {
    const auto& p = poly.points;
    const std::size_t n = p.size();
    const std::size_t segs = poly.closed ? n : n - 1;
    for (std::size_t i = 0; i < segs; ++i) {
        const Point2& a1 = p[i];
        const Point2& a2 = p[(i + 1) % n];
        const double ax0 = std::min(a1.x, a2.x), ax1 = std::max(a1.x, a2.x);
        const double ay0 = std::min(a1.y, a2.y), ay1 = std::max(a1.y, a2.y);
        for (std::size_t j = i + 2; j < segs; ++j) {
            if (poly.closed && i == 0 && j == n - 1) continue;
            const Point2& b1 = p[j];
            const Point2& b2 = p[(j + 1) % n];
            if (std::max(b1.x, b2.x) < ax0 || std::min(b1.x, b2.x) > ax1 || std::max(b1.y, b2.y) < ay0 ||
                std::min(b1.y, b2.y) > ay1) {
                continue;
            }
            if (detail::segments_intersect(a1, a2, b1, b2)) return std::make_pair(i, j);
        }
    }
    return std::nullopt;
}

/// Absolute shoelace area; open polylines are closed implicitly.
inline double polyline_area(const Polyline& poly) {
    const auto& p = poly.points;
    double twice = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Point2& a = p[i];
        const Point2& b = p[(i + 1) % p.size()];
        twice += a.x * b.y - b.x * a.y;
    }
    return std::fabs(twice) / 2.0;
}

inline double polyline_perimeter(const Polyline& poly) {
    const auto& p = poly.points;
    if (p.size() < 2) return 0.0;
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) len += std::hypot(p[i + 1].x - p[i].x, p[i + 1].y - p[i].y);
    if (poly.closed) len += std::hypot(p.front().x - p.back().x, p.front().y - p.back().y);
    return len;
}

/// Closed outline of one leaf in its local frame (unrotated).
inline Polyline leaf_outline(const LeafProfile& p) {
    if (p.tip_samples.size() < 2) throw DomainError("leaf profile needs at least 2 tip samples");
    const Point2 junction{p.semi_major, p.semi_minor};
    const Point2& first = p.tip_samples.front();
    if (std::hypot(first.x - junction.x, first.y - junction.y) > 1e-6) {
        throw DomainError("first tip sample must sit on the ellipse end (semi_major, semi_minor)");
    }
    const int n = p.points_per_segment;
    const Polyline base = half_ellipse(p.semi_major, p.semi_minor, n);
    const Polyline upper = tip_curve(p.tip_samples, n);

    const Point2 start = upper.points.front();
    Polyline out;
    out.closed = true;
    for (const auto& q : base.points) out.points.push_back({p.semi_major - q.x, q.y});
    out.points.front() = {start.x, -start.y};
    out.points.back() = start;
    for (std::size_t i = 1; i < upper.points.size(); ++i) out.points.push_back(upper.points[i]);
    // Lower edge: mirror of the upper edge, walked back toward the base. A tip
    // on the axis is shared by both edges.
    const std::size_t last = upper.points.size() - 1;
    for (std::size_t i = last; i >= 1; --i) {
        if (i == last && upper.points[i].y == 0.0) continue;
        out.points.push_back({upper.points[i].x, -upper.points[i].y});
    }
    return out;
}

inline OutlineMetrics outline_metrics(const LeafPair& lp) {
    OutlineMetrics m;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    auto add = [&](const Polyline& poly) {
        m.area += polyline_area(poly);
        m.perimeter += polyline_perimeter(poly);
        for (const auto& q : poly.points) {
            x0 = std::min(x0, q.x);
            x1 = std::max(x1, q.x);
            y0 = std::min(y0, q.y);
            y1 = std::max(y1, q.y);
        }
    };
    add(lp.element_a);
    if (lp.element_b) add(*lp.element_b);
    m.width = x1 - x0;
    m.height = y1 - y0;
    return m;
}

inline LeafPair build_leaf_pair(const LeafProfile& p) {
    if (!(p.feed_gap >= 0.0) || !std::isfinite(p.feed_gap)) throw DomainError("feed gap must be non-negative");
    if (!std::isfinite(p.rotation_deg)) throw DomainError("rotation must be finite");
    const Polyline local = leaf_outline(p);
    if (local.points.size() < 3) throw GeometryError("outline has fewer than 3 points");
    if (auto hit = find_self_intersection(local)) {
        throw GeometryError("outline self-intersects: segments " + std::to_string(hit->first) + " and " +
                            std::to_string(hit->second));
    }

    LeafPair lp;
    const double shift = p.mirrored_pair ? p.feed_gap / 2.0 : 0.0;
    lp.element_a.closed = true;
    lp.element_a.points.reserve(local.points.size());
    for (const auto& q : local.points) {
        const Point2 r = p.rotation_deg == 0.0 ? q : detail::rotate(q, p.rotation_deg);
        lp.element_a.points.push_back({r.x + shift, r.y});
    }
    lp.feed_a = {shift, 0.0};
    if (p.mirrored_pair) {
        Polyline b;
        b.closed = true;
        b.points.reserve(lp.element_a.points.size());
        double min_x = 1e300;
        for (const auto& q : lp.element_a.points) {
            b.points.push_back({-q.x, q.y});
            min_x = std::min(min_x, q.x);
        }
        if (!(min_x > 0.0)) {
            throw GeometryError("elements overlap across the feed axis; increase feed_gap");
        }
        lp.element_b = std::move(b);
        lp.feed_b = Point2{-shift, 0.0};
    }
    const OutlineMetrics m = outline_metrics(lp);
    if (m.width > p.envelope.width || m.height > p.envelope.height) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "outline %.3f x %.3f mm exceeds the %.3f x %.3f mm envelope", m.width,
                      m.height, p.envelope.width, p.envelope.height);
        throw GeometryError(buf);
    }
    return lp;
}

namespace detail {

inline void dxf_coord(std::string& out, int code, double v) {
    if (std::fabs(v) < 5e-7) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d\n%.6f\n", code, v);
    out += buf;
}

inline void dxf_polyline(std::string& out, const Polyline& poly, const char* layer) {
    out += "0\nLWPOLYLINE\n5\n";
    out += layer[5] == 'A' ? "A1" : "B1";
    out += "\n100\nAcDbEntity\n8\n";
    out += layer;
    out += "\n100\nAcDbPolyline\n90\n" + std::to_string(poly.points.size()) + "\n70\n1\n";
    for (const auto& q : poly.points) {
        dxf_coord(out, 10, q.x);
        dxf_coord(out, 20, q.y);
    }
}

}  // namespace detail

/// Minimal ASCII DXF: $INSUNITS = 4 (mm), one closed LWPOLYLINE per element.
inline std::string export_dxf(const LeafPair& lp) {
    std::string out;
    out += "0\nSECTION\n2\nHEADER\n9\n$INSUNITS\n70\n4\n0\nENDSEC\n";
    out += "0\nSECTION\n2\nENTITIES\n";
    detail::dxf_polyline(out, lp.element_a, "LEAF_A");
    if (lp.element_b) detail::dxf_polyline(out, *lp.element_b, "LEAF_B");
    out += "0\nENDSEC\n0\nEOF\n";
    return out;
}

}  // namespace leafmatch::leafgeom
