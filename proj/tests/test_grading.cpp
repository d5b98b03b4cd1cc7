#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "semfem/grading.hpp"
#include "semfem/mesh.hpp"
#include "semfem/refine.hpp"

using namespace semfem;

namespace {

GradingSpec origin_spec(double beta, double h) {
    GradingSpec spec;
    spec.corners = {{{0.0, 0.0}, beta}};
    spec.h = h;
    return spec;
}

bool same_triangles(const Mesh& a, const Mesh& b) {
    return a.triangles == b.triangles && a.vertices.size() == b.vertices.size();
}

}  // namespace

TEST_CASE("spec validation") {
    REQUIRE_THROWS_AS(validate_grading_spec(origin_spec(1.0, 0.1)), std::invalid_argument);
    REQUIRE_THROWS_AS(validate_grading_spec(origin_spec(-0.1, 0.1)), std::invalid_argument);
    REQUIRE_THROWS_AS(validate_grading_spec(origin_spec(0.4, 0.0)), std::invalid_argument);
    GradingSpec bad = origin_spec(0.4, 0.1);
    bad.kappa = 0.5;
    REQUIRE_THROWS_AS(validate_grading_spec(bad), std::invalid_argument);
    REQUIRE_NOTHROW(validate_grading_spec(origin_spec(0.0, 1.0)));
}

TEST_CASE("beta = 0 reproduces uniform refinement exactly") {
    Mesh m0 = l_shape_initial_mesh();
    double h0 = mesh_size(m0);
    Mesh expect = m0;
    for (int k = 0; k <= 3; ++k) {
        // target exactly h0/2^k: strict marking leaves h_T = target alone
        Mesh g = grade_to(m0, origin_spec(0.0, h0 / (1 << k)));
        REQUIRE(same_triangles(g, expect));
        expect = uniform_refine(expect);
    }
}

TEST_CASE("graded mesh satisfies the two-sided criterion with modest kappa") {
    Mesh m0 = l_shape_initial_mesh();
    for (double beta : {0.4, 0.7}) {
        for (double h : {0.25, 0.08, 0.035}) {
            GradingSpec spec = origin_spec(beta, h);
            Mesh g = grade_to(m0, spec);
            REQUIRE_NOTHROW(validate_mesh(g));
            REQUIRE(std::abs(total_area(g) - 3.0) < 1e-12);

            // upper bound is what grade_to enforces
            for (int t = 0; t < g.n_triangles(); ++t)
                REQUIRE(g.triangle_diam(t) <= spec.h * detail::grading_factor(g, t, spec));

            // measured slack constant stays small
            REQUIRE(check_grading(g, spec) <= 10.0);

            // triangles at the corner are the smallest: h_T ~ h^(1/(1-beta))
            double corner_diam = 0.0;
            for (int t = 0; t < g.n_triangles(); ++t)
                if (detail::corner_in_closure(g, t, spec) >= 0)
                    corner_diam = std::max(corner_diam, g.triangle_diam(t));
            REQUIRE(corner_diam > 0.0);
            REQUIRE(corner_diam < 0.5 * h);
        }
    }
}

TEST_CASE("grading refines toward the corner monotonically") {
    Mesh m0 = l_shape_initial_mesh();
    GradingSpec spec = origin_spec(0.4, 0.035);
    Mesh g = grade_to(m0, spec);
    // smallest triangle touches the corner, largest sits far away
    double dmin = 1e300, dmax = 0.0;
    Point2 where_min{}, where_max{};
    for (int t = 0; t < g.n_triangles(); ++t) {
        double d = g.triangle_diam(t);
        if (d < dmin) {
            dmin = d;
            where_min = g.barycenter(t);
        }
        if (d > dmax) {
            dmax = d;
            where_max = g.barycenter(t);
        }
    }
    REQUIRE(norm(where_min) < 0.05);
    REQUIRE(norm(where_max) > 0.4);
    REQUIRE(dmax / dmin > 4.0);
}

TEST_CASE("grade_to is idempotent") {
    Mesh m0 = l_shape_initial_mesh();
    GradingSpec spec = origin_spec(0.4, 0.08);
    Mesh g = grade_to(m0, spec);
    Mesh g2 = grade_to(g, spec);
    REQUIRE(same_triangles(g, g2));
}

TEST_CASE("shape regularity of graded meshes") {
    Mesh m0 = l_shape_initial_mesh();
    for (double beta : {0.4, 0.7}) {
        Mesh g = grade_to(m0, origin_spec(beta, 0.035));
        REQUIRE(mesh_min_angle(g) > 0.39);  // ~22.4 degrees
    }
}

TEST_CASE("round cap is enforced") {
    Mesh m0 = l_shape_initial_mesh();
    REQUIRE_THROWS_AS(grade_to(m0, origin_spec(0.0, 0.2), 2), std::runtime_error);
}

TEST_CASE("kappa stays near 1 on a uniform mesh without grading weights") {
    Mesh m1 = uniform_refine(l_shape_initial_mesh());
    GradingSpec spec = origin_spec(0.0, mesh_size(m1));
    // phi = 1 everywhere and all diameters <= h; the largest triangle attains
    // h exactly, smaller ones inflate kappa via h / h_T
    double kappa = check_grading(m1, spec);
    REQUIRE(kappa >= 1.0);
    REQUIRE(kappa <= 2.0 + 1e-12);
}
