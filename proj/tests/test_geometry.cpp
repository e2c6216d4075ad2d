#include <doctest.h>

#include <cmath>

#include "hrlnav/geometry.hpp"
#include "hrlnav/rng.hpp"

using namespace hrlnav;
using geom::Vec2;

TEST_CASE("angle wrapping lands in the half-open interval") {
    CHECK(geom::wrap_angle(0.0) == doctest::Approx(0.0));
    CHECK(geom::wrap_angle(geom::kPi) == doctest::Approx(geom::kPi));
    CHECK(geom::wrap_angle(-geom::kPi) == doctest::Approx(geom::kPi));
    CHECK(geom::wrap_angle(3.0 * geom::kPi) == doctest::Approx(geom::kPi));
    CHECK(geom::wrap_angle(2.0 * geom::kPi + 0.25) == doctest::Approx(0.25));

    CHECK(geom::wrap_deg(190.0) == doctest::Approx(-170.0));
    CHECK(geom::wrap_deg(180.0) == doctest::Approx(180.0));
    CHECK(geom::wrap_deg(-180.0) == doctest::Approx(180.0));
    CHECK(geom::wrap_deg(360.0) == doctest::Approx(0.0));

    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const double a = rng.uniform(-50.0, 50.0);
        const double w = geom::wrap_angle(a);
        CHECK(w > -geom::kPi);
        CHECK(w <= geom::kPi);
        // wrapping preserves the angle modulo a full turn
        CHECK(std::abs(std::remainder(w - a, 2.0 * geom::kPi)) < 1e-9);
        const double d = geom::wrap_deg(rng.uniform(-2000.0, 2000.0));
        CHECK(d > -180.0);
        CHECK(d <= 180.0);
    }
}

TEST_CASE("degree conversions round trip") {
    CHECK(geom::deg_to_rad(180.0) == doctest::Approx(geom::kPi));
    CHECK(geom::rad_to_deg(geom::kPi / 2.0) == doctest::Approx(90.0));
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const double d = rng.uniform(-720.0, 720.0);
        CHECK(geom::rad_to_deg(geom::deg_to_rad(d)) == doctest::Approx(d).epsilon(1e-12));
    }
}

TEST_CASE("vector arithmetic") {
    const Vec2 a{1.0, 2.0};
    const Vec2 b{-3.0, 4.5};
    CHECK((a + b).x == doctest::Approx(-2.0));
    CHECK((a - b).y == doctest::Approx(-2.5));
    CHECK((a * 2.0).x == doctest::Approx(2.0));
    CHECK(geom::dot(a, b) == doctest::Approx(-3.0 + 9.0));
    CHECK(geom::distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
    CHECK(Vec2{3.0, 4.0}.norm() == doctest::Approx(5.0));
}

TEST_CASE("point-to-shape distances") {
    const geom::Circle c{{5.0, 5.0}, 1.0};
    CHECK(geom::circle_surface_distance({5.0, 5.0}, c) == doctest::Approx(-1.0));
    CHECK(geom::circle_surface_distance({7.0, 5.0}, c) == doctest::Approx(1.0));
    CHECK(geom::circle_surface_distance({5.0, 8.0}, c) == doctest::Approx(2.0));

    const geom::Rect r{{1.0, 1.0}, {3.0, 2.0}};
    CHECK(geom::rect_surface_distance({2.0, 1.5}, r) == doctest::Approx(0.0));  // inside
    CHECK(geom::rect_surface_distance({3.0, 2.0}, r) == doctest::Approx(0.0));  // corner contact
    CHECK(geom::rect_surface_distance({5.0, 1.5}, r) == doctest::Approx(2.0));  // beyond an edge
    CHECK(geom::rect_surface_distance({4.0, 3.0}, r) ==
          doctest::Approx(std::sqrt(2.0)));  // beyond a corner

    const geom::Rect bounds{{0.0, 0.0}, {10.0, 10.0}};
    CHECK(geom::bounds_interior_distance({1.0, 5.0}, bounds) == doctest::Approx(1.0));
    CHECK(geom::bounds_interior_distance({9.5, 9.0}, bounds) == doctest::Approx(0.5));
    CHECK(geom::bounds_interior_distance({-1.0, 5.0}, bounds) == doctest::Approx(-1.0));
}

TEST_CASE("ray-circle intersection") {
    // circle dead ahead at distance 2, radius 0.5: first hit at 1.5
    const geom::Circle c{{2.0, 0.0}, 0.5};
    auto t = geom::ray_circle({0.0, 0.0}, {1.0, 0.0}, c);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(1.5).epsilon(1e-12));

    // ray pointing away misses
    CHECK_FALSE(geom::ray_circle({0.0, 0.0}, {-1.0, 0.0}, c).has_value());
    // perpendicular offset larger than the radius misses
    CHECK_FALSE(geom::ray_circle({0.0, 1.0}, {1.0, 0.0}, c).has_value());
    // grazing tangent hits at the tangent point
    auto tg = geom::ray_circle({0.0, 0.5}, {1.0, 0.0}, c);
    REQUIRE(tg.has_value());
    CHECK(*tg == doctest::Approx(2.0).epsilon(1e-9));
    // origin inside reports the forward exit distance
    auto ti = geom::ray_circle({2.0, 0.0}, {1.0, 0.0}, c);
    REQUIRE(ti.has_value());
    CHECK(*ti == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ray-rectangle entry and exit") {
    const geom::Rect r{{3.0, -1.0}, {4.0, 1.0}};
    auto t = geom::ray_rect_enter({0.0, 0.0}, {1.0, 0.0}, r);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(3.0).epsilon(1e-12));  // wall 3 m ahead

    CHECK_FALSE(geom::ray_rect_enter({0.0, 2.0}, {1.0, 0.0}, r).has_value());
    CHECK_FALSE(geom::ray_rect_enter({5.0, 0.0}, {1.0, 0.0}, r).has_value());

    // origin inside: enter = 0, exit at the far face
    auto te = geom::ray_rect_enter({3.5, 0.0}, {1.0, 0.0}, r);
    REQUIRE(te.has_value());
    CHECK(*te == doctest::Approx(0.0));
    auto tx = geom::ray_rect_exit({3.5, 0.0}, {1.0, 0.0}, r);
    REQUIRE(tx.has_value());
    CHECK(*tx == doctest::Approx(0.5).epsilon(1e-12));

    // boundary box seen from inside along a diagonal
    const geom::Rect bounds{{0.0, 0.0}, {10.0, 10.0}};
    const double inv = 1.0 / std::sqrt(2.0);
    auto td = geom::ray_rect_exit({5.0, 5.0}, {inv, inv}, bounds);
    REQUIRE(td.has_value());
    CHECK(*td == doctest::Approx(5.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("rect contains its boundary") {
    const geom::Rect r{{0.0, 0.0}, {2.0, 2.0}};
    CHECK(r.contains({0.0, 0.0}));
    CHECK(r.contains({2.0, 2.0}));
    CHECK(r.contains({1.0, 1.0}));
    CHECK_FALSE(r.contains({2.0001, 1.0}));
    CHECK(r.width() == doctest::Approx(2.0));
    CHECK(r.height() == doctest::Approx(2.0));
}
