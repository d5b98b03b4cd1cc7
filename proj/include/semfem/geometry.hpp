#pragma once

#include <array>
#include <cmath>

namespace semfem {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::sqrt(dot(a, a)); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

// Signed area; positive iff (a,b,c) is counterclockwise.
inline double signed_area(Point2 a, Point2 b, Point2 c) {
    return 0.5 * cross(b - a, c - a);
}

// Longest edge length of the triangle (a,b,c).
inline double triangle_diameter(Point2 a, Point2 b, Point2 c) {
    return std::max({dist(a, b), dist(b, c), dist(c, a)});
}

// Smallest interior angle, in radians.
inline double triangle_min_angle(Point2 a, Point2 b, Point2 c) {
    auto angle_at = [](Point2 p, Point2 q, Point2 r) {
        Point2 u = q - p, v = r - p;
        return std::atan2(std::abs(cross(u, v)), dot(u, v));
    };
    return std::min({angle_at(a, b, c), angle_at(b, c, a), angle_at(c, a, b)});
}

// Closed-triangle membership test with a small relative slack.
inline bool point_in_triangle(Point2 p, Point2 a, Point2 b, Point2 c) {
    double s0 = cross(b - a, p - a);
    double s1 = cross(c - b, p - b);
    double s2 = cross(a - c, p - c);
    double scale = std::abs(cross(b - a, c - a));
    double eps = 1e-13 * scale;
    return s0 >= -eps && s1 >= -eps && s2 >= -eps;
}

}  // namespace semfem
