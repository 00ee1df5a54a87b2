#include "stadium/geometry.hpp"

#include <algorithm>
#include <array>

namespace stadium {

const char* to_string(Side s) {
  switch (s) {
    case Side::L: return "L";
    case Side::T: return "T";
    case Side::R: return "R";
    case Side::B: return "B";
  }
  return "?";
}

const char* to_string(Corner c) {
  switch (c) {
    case Corner::b: return "b";
    case Corner::p: return "p";
    case Corner::g: return "g";
    case Corner::r: return "r";
    case Corner::cL: return "cL";
    case Corner::cR: return "cR";
  }
  return "?";
}

bool is_junction(Corner c) { return c != Corner::cL && c != Corner::cR; }

Vec2 StadiumTable::circle_center(Side s) const {
  if (s == Side::L) return {0.0, 0.0};
  if (s == Side::R) return {l_, 0.0};
  throw std::invalid_argument("circle_center: flat side");
}

Vec2 StadiumTable::corner_position(Corner c) const {
  switch (c) {
    case Corner::b: return {0.0, 1.0};
    case Corner::p: return {0.0, -1.0};
    case Corner::g: return {l_, -1.0};
    case Corner::r: return {l_, 1.0};
    case Corner::cL: return {0.0, 0.0};
    case Corner::cR: return {l_, 0.0};
  }
  throw std::invalid_argument("corner_position: bad corner");
}

double StadiumTable::corner_arc_coord(Corner c) const {
  switch (c) {
    case Corner::p: return 0.0;
    case Corner::g: return l_;
    case Corner::r: return l_ + M_PI;
    case Corner::b: return 2.0 * l_ + M_PI;
    default: throw std::invalid_argument("corner_arc_coord: center corner");
  }
}

Vec2 BoundaryPoint::position(const StadiumTable& t) const {
  switch (side) {
    case Side::L: return {std::cos(local), std::sin(local)};
    case Side::R: return {t.l() + std::cos(local), std::sin(local)};
    case Side::T: return {local, 1.0};
    case Side::B: return {local, -1.0};
  }
  throw std::invalid_argument("BoundaryPoint: bad side");
}

Vec2 BoundaryPoint::inward_normal(const StadiumTable& t) const {
  (void)t;
  switch (side) {
    case Side::L:
    case Side::R: return {-std::cos(local), -std::sin(local)};
    case Side::T: return {0.0, -1.0};
    case Side::B: return {0.0, 1.0};
  }
  throw std::invalid_argument("BoundaryPoint: bad side");
}

double BoundaryPoint::arc_coord(const StadiumTable& t) const {
  const double l = t.l();
  switch (side) {
    case Side::B: return local;
    case Side::R: return l + (local + M_PI_2);
    case Side::T: return l + M_PI + (l - local);
    case Side::L: return 2.0 * l + M_PI + (local - M_PI_2);
  }
  throw std::invalid_argument("BoundaryPoint: bad side");
}

double BoundaryPoint::junction_distance(const StadiumTable& t) const {
  const double s = arc_coord(t);
  const double period = t.perimeter();
  double best = period;
  for (Corner c : {Corner::b, Corner::p, Corner::g, Corner::r}) {
    best = std::min(best, std::abs(wrap_signed(s - t.corner_arc_coord(c), period)));
  }
  return best;
}

BoundaryPoint boundary_point_at(const StadiumTable& t, double s) {
  const double l = t.l();
  const double period = t.perimeter();
  s = std::fmod(s, period);
  if (s < 0) s += period;
  if (s < l) return {Side::B, s};
  if (s < l + M_PI) return {Side::R, s - l - M_PI_2};
  if (s < 2.0 * l + M_PI) return {Side::T, l - (s - l - M_PI)};
  return {Side::L, s - 2.0 * l - M_PI + M_PI_2};
}

Vec2 velocity(const StadiumTable& t, const PhasePoint& pp) {
  const Vec2 n = pp.bp.inward_normal(t);
  const double c = std::cos(pp.theta);
  const double s = std::sin(pp.theta);
  return {n.x * c - n.y * s, n.x * s + n.y * c};
}

double phase_distance(const StadiumTable& t, const PhasePoint& a, const PhasePoint& b) {
  const double ds = wrap_signed(a.bp.arc_coord(t) - b.bp.arc_coord(t), t.perimeter());
  return std::hypot(ds, a.theta - b.theta);
}

}  // namespace stadium
