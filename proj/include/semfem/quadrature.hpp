#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace semfem {

// Symmetric quadrature rule on the reference triangle in barycentric
// coordinates; weights sum to 1 and are scaled by the triangle area at use.
struct QuadRule {
    int degree = 0;  // exact for polynomials up to this total degree
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
};

// Edge-midpoint rule: exact for polynomials of degree <= 2.
inline QuadRule midpoint_rule() {
    QuadRule r;
    r.degree = 2;
    r.points = {{{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}}};
    r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return r;
}

// 7-point rule: exact for polynomials of degree <= 5.
inline QuadRule order5_rule() {
    QuadRule r;
    r.degree = 5;
    const double s = std::sqrt(15.0);
    const double b1 = (6.0 + s) / 21.0, w1 = (155.0 + s) / 1200.0;
    const double b2 = (6.0 - s) / 21.0, w2 = (155.0 - s) / 1200.0;
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(9.0 / 40.0);
    for (const auto& [b, w] : {std::pair{b1, w1}, std::pair{b2, w2}}) {
        double a = 1.0 - 2.0 * b;
        r.points.push_back({a, b, b});
        r.points.push_back({b, a, b});
        r.points.push_back({b, b, a});
        r.weights.push_back(w);
        r.weights.push_back(w);
        r.weights.push_back(w);
    }
    return r;
}

}  // namespace semfem
