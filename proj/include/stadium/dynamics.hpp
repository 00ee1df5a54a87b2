#pragma once

#include <limits>
#include <vector>

#include "stadium/geometry.hpp"

namespace stadium {

enum class StepStatus : uint8_t {
  ok,
  corner,      // landed within kSingularTol of a junction corner
  tangential,  // |theta| within kSingularTol of pi/2
};

struct FlightSegment {
  Vec2 start;
  Vec2 dir;
  double tau = 0.0;
  BoundaryPoint end;
  bool near_singular = false;
};

// First boundary intersection of the ray from `pos` along unit `dir`.
// `pos` must be inside the closed table (boundary points allowed when the
// ray points inward). Throws std::logic_error if no intersection exists,
// which indicates a geometry bug for valid input.
FlightSegment next_collision(const StadiumTable& t, const Vec2& pos, const Vec2& dir);

// Specular reflection v' = v - 2(v.n)n; requires v.n < 0.
Vec2 reflect(const Vec2& v, const Vec2& n);

struct StepResult {
  PhasePoint point;  // post-reflection state at the new collision
  FlightSegment flight;
  StepStatus status = StepStatus::ok;
  bool on_gamma_prime = false;  // |theta| <= kSingularTol at an arc collision
};

StepResult billiard_map(const StadiumTable& t, const PhasePoint& pp);
// Direct inverse: traces the incoming ray backwards. Satisfies both
// F^-1(F(x)) = x and the time-reversal conjugacy F^-1 = R o F o R with
// R(s,theta) = (s,-theta); the tests check both since the implementations
// take independent code paths.
StepResult billiard_map_inverse(const StadiumTable& t, const PhasePoint& pp);

struct OrbitStep {
  PhasePoint point;
  double tau = 0.0;    // flight time into this collision (0 for the seed)
  double vy_in = 0.0;  // y velocity of the incoming segment
  StepStatus status = StepStatus::ok;
  bool on_gamma_prime = false;
};

struct Orbit {
  std::vector<OrbitStep> steps;  // steps[0] is the seed point
  bool hit_singularity = false;  // aborted on a corner or tangency
  bool ambiguous = false;        // some arc collision had |theta| <= tol
};

// n applications of the map; aborts early when a junction corner is hit.
Orbit orbit(const StadiumTable& t, const PhasePoint& start, int n);

// Wave front curvature in the mirror-equation sign convention of
// Chernov & Markarian, "Chaotic Billiards": diverging fronts have G > 0,
// a front focusing at distance d ahead has G = -1/d. A fresh point source
// has infinite curvature and is carried as a tag.
struct WaveFront {
  double curvature = 0.0;
  bool point_source = false;
};

// Collision update G+ = G- + 2K/cos(theta) with K = -1 on the arcs and
// K = 0 on the flats (curvature is unchanged by flat collisions).
WaveFront curvature_reflect(const WaveFront& f, const PhasePoint& at);

struct FlightOutcome {
  WaveFront front;
  bool focus_at_arrival = false;  // 1 + tau*G vanished: arrives as a point source
};

// Free flight G -> G/(1 + tau G); passing through the focus is handled by
// the same algebra (sign flip through infinity).
FlightOutcome curvature_flight(const WaveFront& f, double tau);

struct DefocusingReport {
  long long orbits = 0;
  long long skipped = 0;        // orbits aborted on corners/tangencies
  long long segments = 0;       // arc-to-arc segments checked
  long long strict = 0;         // |1 + tau G+| > 1 + band
  long long marginal = 0;       // within band of equality
  long long violations = 0;     // |1 + tau G+| < 1 - band
  double min_expansion = std::numeric_limits<double>::infinity();
  double band = 1e-9;
};

// Seeds point-source wave fronts at the junction corners with random inward
// directions and checks the expansion factor |1 + tau G+| between every pair
// of successive arc collisions (flat collisions in between contribute to tau
// only). Deterministic for a fixed seed.
DefocusingReport defocusing_report(const StadiumTable& t, long long samples, uint64_t seed,
                                   int max_collisions = 24);

}  // namespace stadium
