#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "vperc/predicates.hpp"
#include "vperc/region_graph.hpp"

using namespace vperc;

namespace {

PointSet make_point_set(std::vector<Vec2> pts, Window w) {
    PointSet ps;
    ps.points = std::move(pts);
    ps.window = w;
    ps.intensity = 1.0;
    return ps;
}

// Test-local Sutherland-Hodgman used as the clipping oracle.
double clip_area_oracle(std::vector<Vec2> poly, const Box& rect) {
    auto clip = [&](std::vector<Vec2> in, Vec2 n, double off) {
        std::vector<Vec2> out;
        for (std::size_t i = 0; i < in.size(); ++i) {
            const Vec2 a = in[i];
            const Vec2 b = in[(i + 1) % in.size()];
            const double da = dot(n, a) - off;
            const double db = dot(n, b) - off;
            if (da <= 0) out.push_back(a);
            if ((da <= 0) != (db <= 0)) {
                const double t = da / (da - db);
                out.push_back(a + t * (b - a));
            }
        }
        return out;
    };
    poly = clip(poly, {-1, 0}, -rect.xmin);
    if (poly.size() < 3) return 0;
    poly = clip(poly, {1, 0}, rect.xmax);
    if (poly.size() < 3) return 0;
    poly = clip(poly, {0, -1}, -rect.ymin);
    if (poly.size() < 3) return 0;
    poly = clip(poly, {0, 1}, rect.ymax);
    if (poly.size() < 3) return 0;
    double s = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return 0.5 * std::fabs(s);
}

}  // namespace

TEST_CASE("sample_poisson validates inputs") {
    CHECK_THROWS_AS(sample_poisson({0, 0, 0, 5}, 1.0, SeedPath::root(1)), ParameterError);
    CHECK_THROWS_AS(sample_poisson({0, 0, 5, 5}, 0.0, SeedPath::root(1)), ParameterError);
    CHECK_THROWS_AS(sample_poisson({0, 0, 5, 5}, -2.0, SeedPath::root(1)), ParameterError);
}

TEST_CASE("sample_poisson is deterministic and in-window") {
    const Window w{0, 0, 30, 20};
    const PointSet a = sample_poisson(w, 1.0, SeedPath::root(3).child(7));
    const PointSet b = sample_poisson(w, 1.0, SeedPath::root(3).child(7));
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i] == b.points[i]);
        CHECK(w.contains(a.points[i]));
    }
    std::set<std::pair<double, double>> uniq;
    for (const Vec2 p : a.points) uniq.insert({p.x, p.y});
    CHECK(uniq.size() == a.points.size());
}

TEST_CASE("sample_poisson mean count over replicates") {
    // intensity 1 on [0,100]^2: mean count 10^4, per-replicate sd 100
    const Window w{0, 0, 100, 100};
    const int reps = 10000;
    double sum = 0;
    for (int i = 0; i < reps; ++i)
        sum += static_cast<double>(
            Rng(SeedPath::root(17).child(i)).poisson(w.area()));
    const double mean = sum / reps;
    CHECK(std::fabs(mean - 10000.0) <= 3.0 * 100.0 / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("build_complex rejects degenerate input") {
    const Window w{-30, -30, 30, 30};
    CHECK_THROWS_AS(build_complex(make_point_set({{0, 0}, {1, 1}}, w)),
                    DegenerateGeometryError);
    CHECK_THROWS_AS(build_complex(make_point_set({{0, 0}, {1, 1}, {2, 2}, {3, 3}}, w)),
                    DegenerateGeometryError);
}

TEST_CASE("triangle complex: pairwise adjacent, cells tile the window") {
    const Window w{-30, -30, 30, 30};
    const VoronoiComplex cx = build_complex(make_point_set({{0, 0}, {5, 0}, {0, 5}}, w));
    REQUIRE(cx.cell_count() == 3);
    for (std::uint32_t i = 0; i < 3; ++i) CHECK(cx.neighbors(i).size() == 2);
    double area = 0;
    for (std::uint32_t i = 0; i < 3; ++i) area += cx.polygon(i).area();
    CHECK(area == doctest::Approx(w.area()).epsilon(1e-9));
}

TEST_CASE("four cocircular points: perimeter plus exactly one diagonal") {
    const Window w{-30, -30, 30, 30};
    const VoronoiComplex cx =
        build_complex(make_point_set({{0, 0}, {4, 0}, {4, 4}, {0, 4}}, w));
    long long edges = 0;
    for (std::uint32_t i = 0; i < 4; ++i) edges += static_cast<long long>(cx.neighbors(i).size());
    edges /= 2;
    CHECK(edges == 5);  // 4 perimeter + 1 diagonal
    // the four perimeter edges are all present
    auto adjacent = [&](std::uint32_t a, std::uint32_t b) {
        const auto nb = cx.neighbors(a);
        return std::find(nb.begin(), nb.end(), b) != nb.end();
    };
    CHECK(adjacent(0, 1));
    CHECK(adjacent(1, 2));
    CHECK(adjacent(2, 3));
    CHECK(adjacent(3, 0));
    CHECK((adjacent(0, 2) != adjacent(1, 3)));
    // both diagonal choices satisfy the empty open circumdisk property
    const Triangulation tri = triangulate(cx.nuclei, w);
    for (const auto& t : tri.tris) {
        if (!tri.is_real(t)) continue;
        const Vec2 a = tri.pts[t.v[0]], b = tri.pts[t.v[1]], c = tri.pts[t.v[2]];
        for (std::uint32_t q = 0; q < 4; ++q) {
            const Vec2 d = tri.pts[q];
            CHECK(in_circle(a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y) <= 0);
        }
    }
}

TEST_CASE("random 200-point complex: symmetry, Euler, tiling, duality") {
    const Window w{0, 0, 16, 16};
    PointSet ps = sample_poisson(w, 200.0 / w.area(), SeedPath::root(8));
    while (ps.points.size() < 50)
        ps = sample_poisson(w, 200.0 / w.area(), SeedPath::root(9));
    const VoronoiComplex cx = build_complex(ps);
    const auto n = static_cast<long long>(cx.cell_count());

    long long edge_count = 0;
    for (std::uint32_t i = 0; i < cx.cell_count(); ++i) {
        for (const std::uint32_t j : cx.neighbors(i)) {
            CHECK(j != i);
            const auto nb = cx.neighbors(j);
            CHECK(std::find(nb.begin(), nb.end(), i) != nb.end());
        }
        edge_count += static_cast<long long>(cx.neighbors(i).size());
    }
    edge_count /= 2;

    const Triangulation tri = triangulate(ps.points, w);
    long long faces = 0;
    for (const auto& t : tri.tris) faces += tri.is_real(t);
    CHECK(n - edge_count + faces + 1 == 2);  // Euler with the outer face

    double area = 0;
    for (std::uint32_t i = 0; i < cx.cell_count(); ++i) {
        const ConvexPoly poly = cx.polygon(i);
        area += poly.area();
        // convex and containing its nucleus
        for (int k = 0; k < poly.n; ++k) {
            const Vec2 a = poly.v[k];
            const Vec2 b = poly.v[(k + 1) % poly.n];
            const Vec2 c = poly.v[(k + 2) % poly.n];
            CHECK(orient2d(a.x, a.y, b.x, b.y, c.x, c.y) >= 0);
            CHECK(orient2d(a.x, a.y, b.x, b.y, cx.nuclei[i].x, cx.nuclei[i].y) >= 0);
        }
    }
    CHECK(area == doctest::Approx(w.area()).epsilon(1e-9));

    // interior cells share a positive-length Voronoi edge with every neighbor
    for (std::uint32_t i = 0; i < cx.cell_count(); ++i) {
        if (cx.boundary_flags[i]) continue;
        for (const std::uint32_t j : cx.neighbors(i)) {
            const auto seg = cx.shared_edge(i, j);
            REQUIRE(seg.has_value());
            CHECK(norm(seg->second - seg->first) > 0);
        }
    }
}

TEST_CASE("empty circumcircle holds exhaustively on small instances") {
    for (int inst = 0; inst < 10; ++inst) {
        const Window w{0, 0, 12, 12};
        const PointSet ps = sample_poisson(w, 40.0 / w.area(), SeedPath::root(100).child(inst));
        if (ps.points.size() < 3) continue;
        const Triangulation tri = triangulate(ps.points, w);
        for (const auto& t : tri.tris) {
            if (!tri.is_real(t)) continue;
            const Vec2 a = tri.pts[t.v[0]], b = tri.pts[t.v[1]], c = tri.pts[t.v[2]];
            for (std::uint32_t q = 0; q < tri.n_real; ++q) {
                if (q == t.v[0] || q == t.v[1] || q == t.v[2]) continue;
                CHECK(in_circle(a.x, a.y, b.x, b.y, c.x, c.y, tri.pts[q].x, tri.pts[q].y) <= 0);
            }
        }
    }
}

TEST_CASE("cells_meeting: universal region, degenerate annulus, hand-built five cells") {
    const Window w{-30, -30, 30, 30};
    const VoronoiComplex cx = build_complex(
        make_point_set({{0, 0}, {4, 0}, {-4, 0}, {0, 4}, {0, -4}}, w));

    SUBCASE("universal region returns every cell meeting it") {
        const auto res = cells_meeting(cx, RegionSpec::rectangle({0, 0}, 19, 19));
        CHECK(res.ids.size() == 5);
    }
    SUBCASE("degenerate annulus r == R is empty") {
        const auto res = cells_meeting(cx, RegionSpec::annulus({0, 0}, 6, 6));
        CHECK(res.ids.empty());
    }
    SUBCASE("rectangle covering exactly two hand-computed cells") {
        // center cell is [-2,2]^2; bottom cell is {y <= -2, y <= -x, y <= x}
        const RegionSpec rect = RegionSpec::rectangle({0, -3}, 1, 2);  // [-1,1] x [-5,-1]
        const auto res = cells_meeting(cx, rect);
        REQUIRE(res.ids.size() == 2);
        CHECK(res.ids[0] == 0);
        CHECK(res.ids[1] == 4);
        // clipping oracle on the hand-derived polygons agrees
        const std::vector<Vec2> center_poly = {{-2, -2}, {2, -2}, {2, 2}, {-2, 2}};
        const std::vector<Vec2> right_poly = {{2, -2}, {30, -30}, {30, 30}, {2, 2}};
        const std::vector<Vec2> bottom_poly = {{-30, -30}, {30, -30}, {2, -2}, {-2, -2}};
        const Box rb = rect.outer_box();
        CHECK(clip_area_oracle(center_poly, rb) > 0);
        CHECK(clip_area_oracle(bottom_poly, rb) > 0);
        CHECK(clip_area_oracle(right_poly, rb) == doctest::Approx(0.0));
    }
    SUBCASE("region outside the safe zone is rejected") {
        CHECK_THROWS_AS(cells_meeting(cx, RegionSpec::rectangle({0, 0}, 25, 25)),
                        SafeZoneError);
    }
}

TEST_CASE("clipping consistency across two disjoint regions") {
    const Window w{-8, -8, 24, 24};
    const PointSet ps = sample_poisson(w, 1.0, SeedPath::root(55));
    const VoronoiComplex cx = build_complex(ps);
    const RegionSpec r1 = RegionSpec::rectangle({5, 8}, 1.5, 1.5);
    const RegionSpec r2 = RegionSpec::rectangle({11, 8}, 1.5, 1.5);
    const auto a = cells_meeting(cx, r1);
    const auto b = cells_meeting(cx, r2);
    for (const std::uint32_t id : a.ids) {
        if (std::find(b.ids.begin(), b.ids.end(), id) == b.ids.end()) continue;
        // any cell in both answers really straddles both closures
        CHECK(region_overlap_area(cx.polygon(id), r1) > 0);
        CHECK(region_overlap_area(cx.polygon(id), r2) > 0);
    }
}
