#include "stadium/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "stadium/util.hpp"

namespace stadium {

namespace {

struct Candidate {
  double tau = std::numeric_limits<double>::infinity();
  BoundaryPoint bp;
  bool valid = false;
};

void consider(Candidate& best, double tau, Side side, double local) {
  if (tau > kMinFlight && tau < best.tau) {
    best.tau = tau;
    best.bp = {side, local};
    best.valid = true;
  }
}

// Roots of |pos + tau*dir - c|^2 = 1 via the stabilized quadratic formula.
int circle_roots(const Vec2& pos, const Vec2& dir, const Vec2& c, double out[2]) {
  const Vec2 rel = pos - c;
  const double b = rel.dot(dir);
  const double q = rel.dot(rel) - 1.0;
  const double disc = b * b - q;
  if (disc < 0.0) return 0;
  const double sq = std::sqrt(disc);
  const double big = -(b + std::copysign(sq, b));
  if (big == 0.0) {
    out[0] = 0.0;
    return 1;
  }
  out[0] = big;
  out[1] = q / big;
  return 2;
}

void consider_arc(const StadiumTable& t, Candidate& best, const Vec2& pos, const Vec2& dir,
                  Side side) {
  const Vec2 c = t.circle_center(side);
  double roots[2];
  const int n = circle_roots(pos, dir, c, roots);
  for (int i = 0; i < n; ++i) {
    const double tau = roots[i];
    if (tau <= kMinFlight) continue;
    const Vec2 hit = pos + dir * tau;
    if (side == Side::L && hit.x > kRangeSlack) continue;
    if (side == Side::R && hit.x < t.l() - kRangeSlack) continue;
    double phi = std::atan2(hit.y - c.y, hit.x - c.x);
    if (side == Side::L && phi < M_PI_2) phi += 2.0 * M_PI;  // map to [pi/2, 3pi/2]
    consider(best, tau, side, phi);
  }
}

void consider_flat(const StadiumTable& t, Candidate& best, const Vec2& pos, const Vec2& dir,
                   Side side) {
  const double y = (side == Side::T) ? 1.0 : -1.0;
  if (dir.y == 0.0) return;
  const double tau = (y - pos.y) / dir.y;
  if (tau <= kMinFlight) return;
  const double x = pos.x + tau * dir.x;
  if (x < -kRangeSlack || x > t.l() + kRangeSlack) return;
  consider(best, tau, side, std::clamp(x, 0.0, t.l()));
}

}  // namespace

FlightSegment next_collision(const StadiumTable& t, const Vec2& pos, const Vec2& dir) {
  Candidate best;
  consider_arc(t, best, pos, dir, Side::L);
  consider_arc(t, best, pos, dir, Side::R);
  consider_flat(t, best, pos, dir, Side::T);
  consider_flat(t, best, pos, dir, Side::B);
  if (!best.valid) throw std::logic_error("next_collision: no-intersection");
  FlightSegment seg;
  seg.start = pos;
  seg.dir = dir;
  seg.tau = best.tau;
  seg.end = best.bp;
  seg.near_singular = best.bp.junction_distance(t) < kSingularTol;
  return seg;
}

Vec2 reflect(const Vec2& v, const Vec2& n) {
  const double vn = v.dot(n);
  if (vn >= 0.0) throw std::invalid_argument("reflect: grazing or outgoing direction");
  return v - n * (2.0 * vn);
}

namespace {

StepResult step_from(const StadiumTable& t, const Vec2& pos, const Vec2& dir) {
  StepResult r;
  r.flight = next_collision(t, pos, dir);
  const Vec2 n = r.flight.end.inward_normal(t);
  const Vec2 out = reflect(dir, n);
  r.point.bp = r.flight.end;
  r.point.theta = signed_angle(n, out);
  if (r.flight.near_singular) {
    r.status = StepStatus::corner;
  } else if (M_PI_2 - std::abs(r.point.theta) <= kSingularTol) {
    r.status = StepStatus::tangential;
  }
  r.on_gamma_prime = r.point.bp.on_arc() && std::abs(r.point.theta) <= kSingularTol;
  return r;
}

}  // namespace

StepResult billiard_map(const StadiumTable& t, const PhasePoint& pp) {
  return step_from(t, pp.bp.position(t), velocity(t, pp));
}

StepResult billiard_map_inverse(const StadiumTable& t, const PhasePoint& pp) {
  const Vec2 n = pp.bp.inward_normal(t);
  const Vec2 v_out = velocity(t, pp);
  const Vec2 v_in = v_out - n * (2.0 * v_out.dot(n));  // un-reflect at the current point
  StepResult r = step_from(t, pp.bp.position(t), -v_in);
  // The backward trace lands with the reversed outgoing velocity; flip theta
  // so the result is the forward-time state at the previous collision.
  r.point.theta = -r.point.theta;
  r.on_gamma_prime = r.point.bp.on_arc() && std::abs(r.point.theta) <= kSingularTol;
  return r;
}

Orbit orbit(const StadiumTable& t, const PhasePoint& start, int n) {
  if (n < 1) throw std::invalid_argument("orbit: n must be >= 1");
  Orbit o;
  o.steps.reserve(static_cast<size_t>(n) + 1);
  OrbitStep seed;
  seed.point = start;
  // Incoming y-velocity at the seed: on flats the reflection flips v_y, so
  // the pre-collision value is recoverable from the outgoing state.
  const Vec2 v0 = velocity(t, start);
  seed.vy_in = start.bp.on_arc() ? v0.y : -v0.y;
  seed.on_gamma_prime = start.bp.on_arc() && std::abs(start.theta) <= kSingularTol;
  o.steps.push_back(seed);
  o.ambiguous = seed.on_gamma_prime;

  PhasePoint cur = start;
  for (int i = 0; i < n; ++i) {
    StepResult s = billiard_map(t, cur);
    OrbitStep step;
    step.point = s.point;
    step.tau = s.flight.tau;
    step.vy_in = s.flight.dir.y;
    step.status = s.status;
    step.on_gamma_prime = s.on_gamma_prime;
    o.steps.push_back(step);
    o.ambiguous = o.ambiguous || s.on_gamma_prime;
    if (s.status != StepStatus::ok) {
      o.hit_singularity = true;
      break;
    }
    cur = s.point;
  }
  return o;
}

WaveFront curvature_reflect(const WaveFront& f, const PhasePoint& at) {
  if (!at.bp.on_arc()) return f;  // flat walls leave the curvature unchanged
  if (f.point_source) return f;
  const double c = std::cos(at.theta);
  if (c <= kSingularTol) throw std::invalid_argument("curvature_reflect: grazing collision");
  return {f.curvature - 2.0 / c, false};
}

FlightOutcome curvature_flight(const WaveFront& f, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("curvature_flight: tau must be positive");
  if (f.point_source) return {{1.0 / tau, false}, false};
  const double denom = 1.0 + tau * f.curvature;
  if (std::abs(denom) < 1e-14) return {{0.0, true}, true};  // focuses exactly at arrival
  return {{f.curvature / denom, false}, false};
}

DefocusingReport defocusing_report(const StadiumTable& t, long long samples, uint64_t seed,
                                   int max_collisions) {
  if (samples < 1) throw std::invalid_argument("defocusing_report: samples must be >= 1");
  DefocusingReport rep;
  static const Corner kJunctions[4] = {Corner::b, Corner::p, Corner::g, Corner::r};

  for (long long i = 0; rep.segments < samples; ++i) {
    const Corner corner = kJunctions[i % 4];
    const Vec2 pos = t.corner_position(corner);
    // Inward half-plane of directions at a junction: d_y < 0 on the top
    // corners, d_y > 0 on the bottom ones.
    const double u = mix_unit(seed, static_cast<uint64_t>(i), 0);
    const double margin = 1e-6;
    double psi = -M_PI + margin + (M_PI - 2.0 * margin) * u;
    if (corner == Corner::p || corner == Corner::g) psi = -psi;
    Vec2 dir = unit_vector(psi);

    ++rep.orbits;
    WaveFront front{0.0, true};  // point source at the corner
    bool have_arc = false;       // saw a post-reflection curvature on an arc
    WaveFront at_arc;
    double tau_accum = 0.0;

    Vec2 p = pos;
    PhasePoint cur;
    bool first = true;
    for (int k = 0; k < max_collisions; ++k) {
      StepResult s;
      if (first) {
        s = step_from(t, p, dir);
        first = false;
      } else {
        s = billiard_map(t, cur);
      }
      const FlightOutcome fo = curvature_flight(front, s.flight.tau);
      front = fo.focus_at_arrival ? WaveFront{0.0, true} : fo.front;
      tau_accum += s.flight.tau;
      if (s.status != StepStatus::ok) {
        ++rep.skipped;
        break;
      }
      if (s.point.bp.on_arc()) {
        if (have_arc) {
          const double e = std::abs(1.0 + tau_accum * at_arc.curvature);
          ++rep.segments;
          rep.min_expansion = std::min(rep.min_expansion, e);
          if (e < 1.0 - rep.band)
            ++rep.violations;
          else if (e <= 1.0 + rep.band)
            ++rep.marginal;
          else
            ++rep.strict;
          if (rep.segments >= samples) break;
        }
        front = curvature_reflect(front, s.point);
        at_arc = front;
        have_arc = !front.point_source;
        tau_accum = 0.0;
      }
      cur = s.point;
    }
  }
  return rep;
}

}  // namespace stadium
