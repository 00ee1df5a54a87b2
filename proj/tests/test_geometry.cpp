#include "doctest.h"
#include "stadium/geometry.hpp"

using namespace stadium;

TEST_CASE("table rejects nonpositive flat length") {
  CHECK_THROWS_AS(StadiumTable(0.0), std::invalid_argument);
  CHECK_THROWS_AS(StadiumTable(-1.0), std::invalid_argument);
}

TEST_CASE("corner positions and arc coordinates") {
  StadiumTable t(2.0);
  CHECK(t.perimeter() == doctest::Approx(2 * M_PI + 4).epsilon(1e-15));
  CHECK(t.corner_position(Corner::b).x == 0.0);
  CHECK(t.corner_position(Corner::b).y == 1.0);
  CHECK(t.corner_position(Corner::g).x == 2.0);
  CHECK(t.corner_position(Corner::g).y == -1.0);
  CHECK(t.corner_position(Corner::cR).x == 2.0);

  // Junctions sit at the meeting points of the side parameterizations.
  BoundaryPoint on_L{Side::L, M_PI_2};
  BoundaryPoint on_T{Side::T, 0.0};
  CHECK((on_L.position(t) - on_T.position(t)).norm() < 1e-15);
  CHECK(std::abs(on_L.arc_coord(t) - on_T.arc_coord(t)) < 1e-12);
  CHECK(on_L.junction_distance(t) < 1e-15);
}

TEST_CASE("arc coordinate round trip across the whole boundary") {
  StadiumTable t(0.7);
  const double P = t.perimeter();
  for (int i = 0; i < 1000; ++i) {
    const double s = P * (i + 0.5) / 1000.0;
    const BoundaryPoint bp = boundary_point_at(t, s);
    CHECK(std::abs(bp.arc_coord(t) - s) < 1e-12);
    // position satisfies its side's defining equation
    const Vec2 pos = bp.position(t);
    switch (bp.side) {
      case Side::L: CHECK(std::abs(pos.norm() - 1.0) < 1e-12); break;
      case Side::R: CHECK(std::abs((pos - Vec2{0.7, 0.0}).norm() - 1.0) < 1e-12); break;
      case Side::T: CHECK(pos.y == 1.0); break;
      case Side::B: CHECK(pos.y == -1.0); break;
    }
    CHECK(std::abs(bp.inward_normal(t).norm() - 1.0) < 1e-14);
  }
}

TEST_CASE("velocity rotates the inward normal by theta") {
  StadiumTable t(1.0);
  PhasePoint pp{{Side::L, M_PI}, 0.0};
  Vec2 v = velocity(t, pp);
  CHECK(v.x == doctest::Approx(1.0).epsilon(1e-15));  // inward normal at (-1,0)
  CHECK(std::abs(v.y) < 1e-15);

  pp.theta = 0.5;
  v = velocity(t, pp);
  CHECK(std::abs(signed_angle(pp.bp.inward_normal(t), v) - 0.5) < 1e-14);
  CHECK(std::abs(v.norm() - 1.0) < 1e-15);
}

TEST_CASE("phase distance wraps the arc coordinate") {
  StadiumTable t(2.0);
  PhasePoint a{boundary_point_at(t, 0.01), 0.1};
  PhasePoint b{boundary_point_at(t, t.perimeter() - 0.01), 0.1};
  CHECK(phase_distance(t, a, b) == doctest::Approx(0.02).epsilon(1e-9));
}
