#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "eaw/mesh.hpp"
#include "eaw/space.hpp"

using namespace eaw;

namespace {

const Rect kBox{-1.0, 1.0, 0.0, 1.0};

PolyMesh unit_square_mesh() {
  return build_mesh_from_cells({{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}, {}, {0, 1, 0, 1}, std::nullopt);
}

}  // namespace

TEST_CASE("segment quadrature") {
  const QuadratureRule r = segment_rule({0, 0}, {1, 0}, 3);
  CHECK(r.total_weight() == doctest::Approx(1.0).epsilon(1e-14));
  double s3 = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q) s3 += r.weights[q] * std::pow(r.points[q].x, 3);
  CHECK(s3 == doctest::Approx(0.25).epsilon(1e-14));  // antiderivative oracle
}

TEST_CASE("volume quadrature on polygons") {
  PolyMesh square = unit_square_mesh();
  DgSpace sp(square, SpaceKind::VectorElastic);

  SUBCASE("constant integrates to the area") {
    const QuadratureRule r = sp.volume_rule(0, 2);
    CHECK(r.total_weight() == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("x^2 y^2 over the unit square") {
    const QuadratureRule r = sp.volume_rule(0, 4);
    double v = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q)
      v += r.weights[q] * r.points[q].x * r.points[q].x * r.points[q].y * r.points[q].y;
    CHECK(v == doctest::Approx(1.0 / 9.0).epsilon(1e-13));
  }
  SUBCASE("odd moment over a centered hexagon vanishes") {
    Polygon hex;
    const double pi = std::acos(-1.0);
    for (int k = 0; k < 6; ++k) hex.push_back({std::cos(k * pi / 3.0), std::sin(k * pi / 3.0)});
    const Vec2 c = polygon_centroid(hex);
    std::vector<std::array<Vec2, 3>> fan;
    for (int k = 0; k < 6; ++k) fan.push_back({c, hex[k], hex[(k + 1) % 6]});
    const QuadratureRule r = composite_triangle_rule(fan, 3);
    double v = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) v += r.weights[q] * r.points[q].x;
    CHECK(std::abs(v) < 1e-14);
  }
  SUBCASE("random Voronoi cell matches analytic polygon moments") {
    const PolyMesh mesh = generate_mesh(kBox, 0.0, 5, 5, 8, 17);
    DgSpace msp(mesh, SpaceKind::VectorElastic);
    for (int k = 0; k < msp.n_elements(); ++k) {
      const Polygon poly = mesh.element_polygon(msp.element_id(k));
      const QuadratureRule r = msp.volume_rule(k, 8);
      for (int a = 0; a <= 8; ++a)
        for (int b = 0; a + b <= 8; ++b) {
          double v = 0.0;
          for (std::size_t q = 0; q < r.size(); ++q)
            v += r.weights[q] * std::pow(r.points[q].x, a) * std::pow(r.points[q].y, b);
          const double exact = polygon_moment(poly, a, b);
          CHECK(std::abs(v - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
        }
    }
  }
  SUBCASE("order beyond the supported maximum names it") {
    try {
      reference_triangle_rule(kMaxQuadratureOrder + 1);
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find(std::to_string(kMaxQuadratureOrder)) != std::string::npos);
    }
  }
}

TEST_CASE("basis modes") {
  SUBCASE("p=0 is a single constant mode with zero gradient") {
    Basis b({0, 1, 0, 1}, 0);
    REQUIRE(b.size() == 1);
    double v[1];
    Vec2 g[1];
    b.eval_grad({0.3, 0.7}, v, g);
    CHECK(v[0] == doctest::Approx(1.0));
    CHECK(g[0].x == 0.0);
    CHECK(g[0].y == 0.0);
  }
  SUBCASE("p=1 spans {1, x, y}: Vandermonde rank is 3") {
    Basis b({0, 1, 0, 1}, 1);
    REQUIRE(b.size() == 3);
    Rng rng(1);
    Eigen::MatrixXd vand(6, 3);
    for (int i = 0; i < 6; ++i) {
      double v[3];
      b.eval({rng.uniform(), rng.uniform()}, v);
      for (int m = 0; m < 3; ++m) vand(i, m) = v[m];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(vand);
    CHECK(lu.rank() == 3);
  }
  SUBCASE("gradient agrees with central differences") {
    Basis b({-0.3, 0.9, 0.1, 0.8}, 4);
    const int nm = b.size();
    std::vector<double> v(nm), vp(nm), vm(nm);
    std::vector<Vec2> g(nm);
    Rng rng(2);
    const double h = 1e-6;
    for (int trial = 0; trial < 5; ++trial) {
      const Vec2 p{rng.uniform(-0.2, 0.8), rng.uniform(0.2, 0.7)};
      const Vec2 dir = [&] {
        const double a = rng.uniform(0.0, 6.28);
        return Vec2{std::cos(a), std::sin(a)};
      }();
      b.eval_grad(p, v.data(), g.data());
      b.eval(p + h * dir, vp.data());
      b.eval(p - h * dir, vm.data());
      for (int m = 0; m < nm; ++m) {
        const double fd = (vp[m] - vm[m]) / (2.0 * h);
        const double an = dot(g[m], dir);
        CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
      }
    }
  }
}

TEST_CASE("dof layout partitions [0, n) contiguously") {
  PolyMesh mesh = generate_mesh(kBox, 0.0, 7, 7, 8, 4);
  set_degrees(mesh, 2, 3);
  DgSpace se(mesh, SpaceKind::VectorElastic);
  DgSpace sa(mesh, SpaceKind::ScalarAcoustic);
  CHECK(se.n_dofs() == 7 * 2 * mode_count(2));
  CHECK(sa.n_dofs() == 7 * mode_count(3));
  int expect = 0;
  for (int k = 0; k < se.n_elements(); ++k) {
    CHECK(se.offset(k) == expect);
    expect += se.block_size(k);
  }
  CHECK(expect == se.n_dofs());
}

TEST_CASE("local mass matrices are SPD with finite condition") {
  const PolyMesh mesh = generate_mesh(kBox, 0.0, 6, 6, 10, 21);
  PolyMesh m2 = mesh;
  set_degrees(m2, 3);
  DgSpace sp(m2, SpaceKind::ScalarAcoustic);
  const double cond = max_local_mass_condition(sp);
  CHECK(std::isfinite(cond));
  CHECK(cond >= 1.0);
}

TEST_CASE("l2 projection") {
  PolyMesh mesh = generate_mesh(kBox, 0.0, 6, 6, 10, 8);

  SUBCASE("constants and polynomials reproduce") {
    set_degrees(mesh, 2);
    DgSpace sa(mesh, SpaceKind::ScalarAcoustic);
    const Eigen::VectorXd c1 = l2_project(sa, [](double, double) { return 1.0; });
    const Eigen::VectorXd cxy = l2_project(sa, [](double x, double y) { return x * y; });
    Rng rng(3);
    for (int k = 0; k < sa.n_elements(); ++k) {
      const Polygon poly = mesh.element_polygon(sa.element_id(k));
      for (int i = 0; i < 4; ++i) {
        Vec2 p{rng.uniform(-1, 1), rng.uniform(0, 1)};
        if (!point_in_polygon(p, poly)) continue;
        CHECK(sa.eval_scalar(c1, k, p) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(sa.eval_scalar(cxy, k, p) - p.x * p.y) < 1e-12);
      }
    }
    DgSpace se(mesh, SpaceKind::VectorElastic);
    const Eigen::VectorXd cv =
        l2_project(se, [](double x, double y) { return Vec2{x * y, x - y}; });
    for (int k = 0; k < se.n_elements(); ++k) {
      const Vec2 c = mesh.elements[se.element_id(k)].centroid;
      const Vec2 v = se.eval_vector(cv, k, c);
      CHECK(std::abs(v.x - c.x * c.y) < 1e-12);
      CHECK(std::abs(v.y - (c.x - c.y)) < 1e-12);
    }
  }

  SUBCASE("smooth field converges at the h^{p+1} rate") {
    const double pi = std::acos(-1.0);
    auto f = [pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
    std::vector<double> hs, errs;
    for (int n : {8, 16, 32, 64}) {
      PolyMesh m = generate_mesh(kBox, 0.0, n, n, 30, 1000 + n);
      set_degrees(m, 2);
      DgSpace sp(m, SpaceKind::ScalarAcoustic);
      const Eigen::VectorXd c = l2_project(sp, f);
      double err2 = 0.0;
      for (int k = 0; k < sp.n_elements(); ++k) {
        const QuadratureRule r = sp.volume_rule(k, 10);
        for (std::size_t q = 0; q < r.size(); ++q) {
          const double d = sp.eval_scalar(c, k, r.points[q]) - f(r.points[q].x, r.points[q].y);
          err2 += r.weights[q] * d * d;
        }
      }
      hs.push_back(m.max_diameter());
      errs.push_back(std::sqrt(err2));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      sx += std::log(hs[i]);
      sy += std::log(errs[i]);
      sxx += std::log(hs[i]) * std::log(hs[i]);
      sxy += std::log(hs[i]) * std::log(errs[i]);
    }
    const double n = static_cast<double>(hs.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope > 2.5);
    CHECK(slope < 3.5);
  }
}
