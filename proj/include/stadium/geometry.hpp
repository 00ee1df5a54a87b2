#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace stadium {

// Singularity tolerance: arc-length distance to a junction corner, |theta|
// band for perpendicular arc hits, and pi/2 - |theta| for tangency.
inline constexpr double kSingularTol = 1e-10;
// Minimum flight time; rejects the departure point when intersecting from
// a boundary position.
inline constexpr double kMinFlight = 1e-12;
// Classification slack for assigning a hit to a boundary piece near the
// junctions, so rays aimed at a junction cannot fall between pieces.
inline constexpr double kRangeSlack = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  Vec2 normalized() const {
    const double n = norm();
    return {x / n, y / n};
  }
};

inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Signed angle from `a` to `b`, counterclockwise positive, in (-pi, pi].
inline double signed_angle(const Vec2& a, const Vec2& b) {
  return std::atan2(a.cross(b), a.dot(b));
}

inline double wrap_signed(double v, double period) {
  v = std::fmod(v, period);
  if (v > 0.5 * period) v -= period;
  if (v <= -0.5 * period) v += period;
  return v;
}

// Boundary components: L/R are the unit semicircles, T/B the flats.
enum class Side : uint8_t { L, T, R, B };

// The four junction points plus the two semicircle centers. Junction
// labels follow the figure convention b=(0,1), p=(0,-1), g=(l,-1), r=(l,1).
enum class Corner : uint8_t { b, p, g, r, cL, cR };

const char* to_string(Side s);
const char* to_string(Corner c);
bool is_junction(Corner c);

// Stadium table with unit semicircle radius: left circle centered at the
// origin (boundary x <= 0), right circle at (l, 0) (boundary x >= l),
// flats y = +-1 for x in [0, l].
class StadiumTable {
 public:
  explicit StadiumTable(double flat_length) : l_(flat_length) {
    if (!(flat_length > 0.0) || !std::isfinite(flat_length))
      throw std::invalid_argument("StadiumTable: flat length must be positive");
  }

  double l() const { return l_; }
  double perimeter() const { return 2.0 * M_PI + 2.0 * l_; }

  Vec2 circle_center(Side s) const;
  Vec2 corner_position(Corner c) const;
  // Arc-length coordinate of a junction corner (see BoundaryPoint::arc_coord).
  double corner_arc_coord(Corner c) const;

 private:
  double l_;
};

// Point of the boundary, parameterized per side:
//   L: polar angle in [pi/2, 3pi/2] about (0,0),
//   R: polar angle in [-pi/2, pi/2] about (l,0),
//   T/B: abscissa in [0, l].
// The global arc-length coordinate runs counterclockwise from p=(0,-1):
// B: [0,l], R: [l, l+pi], T: [l+pi, 2l+pi], L: [2l+pi, 2l+2pi).
struct BoundaryPoint {
  Side side = Side::B;
  double local = 0.0;

  Vec2 position(const StadiumTable& t) const;
  Vec2 inward_normal(const StadiumTable& t) const;
  double arc_coord(const StadiumTable& t) const;
  // Arc-length distance to the nearest junction corner.
  double junction_distance(const StadiumTable& t) const;
  bool on_arc() const { return side == Side::L || side == Side::R; }
};

BoundaryPoint boundary_point_at(const StadiumTable& t, double arc_coord);

// Phase point: boundary point plus the signed angle theta in (-pi/2, pi/2)
// between the inward normal and the outgoing velocity. Positive theta means
// the velocity is rotated counterclockwise from the normal; this convention
// is frozen here and used consistently by the coding layer.
struct PhasePoint {
  BoundaryPoint bp;
  double theta = 0.0;
};

// Outgoing unit velocity of a phase point.
Vec2 velocity(const StadiumTable& t, const PhasePoint& pp);

// Distance in the (arc-length, theta) metric, wrapping the arc coordinate.
double phase_distance(const StadiumTable& t, const PhasePoint& a, const PhasePoint& b);

}  // namespace stadium
