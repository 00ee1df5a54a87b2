#include "stadium/coding.hpp"

#include <cmath>

namespace stadium {

const char* to_string(CodeLetter c) {
  switch (c) {
    case CodeLetter::Lp: return "L+";
    case CodeLetter::Lm: return "L-";
    case CodeLetter::T: return "T";
    case CodeLetter::B: return "B";
    case CodeLetter::Rp: return "R+";
    case CodeLetter::Rm: return "R-";
  }
  return "?";
}

bool is_arc_letter(CodeLetter c) {
  return c == CodeLetter::Lp || c == CodeLetter::Lm || c == CodeLetter::Rp ||
         c == CodeLetter::Rm;
}

Side side_of(CodeLetter c) {
  switch (c) {
    case CodeLetter::Lp:
    case CodeLetter::Lm: return Side::L;
    case CodeLetter::Rp:
    case CodeLetter::Rm: return Side::R;
    case CodeLetter::T: return Side::T;
    case CodeLetter::B: return Side::B;
  }
  return Side::B;
}

std::string word_string(std::span<const CodeLetter> w) {
  std::string s;
  for (CodeLetter c : w) s += to_string(c);
  return s;
}

PointCode code_point(const PhasePoint& pp) {
  switch (pp.bp.side) {
    case Side::T: return {CodeLetter::T, std::nullopt};
    case Side::B: return {CodeLetter::B, std::nullopt};
    case Side::L:
      if (std::abs(pp.theta) <= kSingularTol) return {CodeLetter::Lp, CodeLetter::Lm};
      return {pp.theta > 0 ? CodeLetter::Lp : CodeLetter::Lm, std::nullopt};
    case Side::R:
      if (std::abs(pp.theta) <= kSingularTol) return {CodeLetter::Rp, CodeLetter::Rm};
      return {pp.theta > 0 ? CodeLetter::Rp : CodeLetter::Rm, std::nullopt};
  }
  throw std::invalid_argument("code_point: bad side");
}

CodedOrbit code_orbit(const StadiumTable& t, const PhasePoint& start, int n) {
  const Orbit o = orbit(t, start, n);
  CodedOrbit co;
  co.singular = o.hit_singularity;
  co.letters.reserve(o.steps.size());
  for (const OrbitStep& s : o.steps) {
    const PointCode pc = code_point(s.point);
    co.letters.push_back(pc.primary);
    if (pc.ambiguous()) co.unique = false;
  }
  if (co.singular) co.unique = false;
  return co;
}

const char* to_string(PairLetter c) {
  switch (c) {
    case PairLetter::LLp: return "LL+";
    case PairLetter::LLm: return "LL-";
    case PairLetter::RRp: return "RR+";
    case PairLetter::RRm: return "RR-";
    case PairLetter::LT: return "LT";
    case PairLetter::LB: return "LB";
    case PairLetter::LR: return "LR";
    case PairLetter::TL: return "TL";
    case PairLetter::TB: return "TB";
    case PairLetter::TR: return "TR";
    case PairLetter::BL: return "BL";
    case PairLetter::BT: return "BT";
    case PairLetter::BR: return "BR";
    case PairLetter::RL: return "RL";
    case PairLetter::RT: return "RT";
    case PairLetter::RB: return "RB";
  }
  return "?";
}

namespace {

PairLetter regroup_pair(CodeLetter a, CodeLetter b) {
  const Side sa = side_of(a);
  const Side sb = side_of(b);
  if (sa == Side::L && sb == Side::L) {
    if (a != b) throw std::invalid_argument("unrealizable-pair: mixed-sign arc pair");
    return a == CodeLetter::Lp ? PairLetter::LLp : PairLetter::LLm;
  }
  if (sa == Side::R && sb == Side::R) {
    if (a != b) throw std::invalid_argument("unrealizable-pair: mixed-sign arc pair");
    return a == CodeLetter::Rp ? PairLetter::RRp : PairLetter::RRm;
  }
  switch (sa) {
    case Side::L:
      return sb == Side::T ? PairLetter::LT : (sb == Side::B ? PairLetter::LB : PairLetter::LR);
    case Side::T:
      if (sb == Side::T) throw std::invalid_argument("unrealizable-pair: TT");
      return sb == Side::L ? PairLetter::TL : (sb == Side::B ? PairLetter::TB : PairLetter::TR);
    case Side::B:
      if (sb == Side::B) throw std::invalid_argument("unrealizable-pair: BB");
      return sb == Side::L ? PairLetter::BL : (sb == Side::T ? PairLetter::BT : PairLetter::BR);
    case Side::R:
      return sb == Side::L ? PairLetter::RL : (sb == Side::T ? PairLetter::RT : PairLetter::RB);
  }
  throw std::invalid_argument("unrealizable-pair: bad letters");
}

}  // namespace

std::vector<PairLetter> phi_regroup(std::span<const CodeLetter> w) {
  if (w.size() < 2) throw std::invalid_argument("phi_regroup: word length must be >= 2");
  std::vector<PairLetter> out;
  out.reserve(w.size() - 1);
  for (size_t i = 0; i + 1 < w.size(); ++i) out.push_back(regroup_pair(w[i], w[i + 1]));
  return out;
}

int SignedComposition::weight() const {
  int w = std::abs(trailing_flats);
  for (const Block& b : blocks) w += std::abs(b.flats) + b.arcs;
  return w;
}

std::string SignedComposition::str() const {
  std::string s;
  auto app = [&s](int v) {
    if (!s.empty()) s += ',';
    s += std::to_string(v);
  };
  for (const Block& b : blocks) {
    app(b.flats);
    app(b.arcs);
  }
  if (trailing_flats != 0 || blocks.empty()) app(trailing_flats);
  return s;
}

SignedComposition signed_composition(std::span<const CollisionEvent> events,
                                     bool allow_no_arc) {
  SignedComposition comp;
  int flat_run = 0;
  double flat_entry_vy = 0.0;
  int arc_run = 0;
  Side arc_side = Side::L;

  auto close_arc_run = [&](int signed_flats) {
    comp.blocks.push_back({signed_flats, arc_run});
    arc_run = 0;
  };

  int pending_flats = 0;  // signed flat run waiting for its arc block
  for (const CollisionEvent& e : events) {
    if (e.is_arc) {
      if (arc_run > 0 && e.side != arc_side) {
        // Switch of semicircle with no flats in between: empty flat run.
        close_arc_run(pending_flats);
        pending_flats = 0;
      }
      if (arc_run == 0) arc_side = e.side;
      if (flat_run > 0) {
        if (arc_run > 0) close_arc_run(pending_flats);
        pending_flats = (flat_entry_vy >= 0 ? flat_run : -flat_run);
        flat_run = 0;
        arc_side = e.side;
      }
      ++arc_run;
    } else {
      if (flat_run == 0) flat_entry_vy = e.vy_in;
      ++flat_run;
    }
  }
  if (arc_run > 0) close_arc_run(pending_flats);
  if (comp.blocks.empty() && !allow_no_arc) throw std::invalid_argument("empty-arc-run");
  comp.trailing_flats = flat_run == 0 ? 0 : (flat_entry_vy >= 0 ? flat_run : -flat_run);
  return comp;
}

SignedComposition signed_composition_of_orbit(const StadiumTable& t, const Orbit& o) {
  (void)t;
  if (o.hit_singularity) throw std::invalid_argument("signed_composition_of_orbit: singular orbit");
  std::vector<CollisionEvent> ev;
  ev.reserve(o.steps.size());
  for (const OrbitStep& s : o.steps)
    ev.push_back({s.point.bp.on_arc(), s.point.bp.side, s.vy_in});
  return signed_composition(ev);
}

SignedComposition reverse_composition(const SignedComposition& c) {
  // Reversing time reverses the block order. A flat run entered with
  // transverse velocity e is left with e*(-1)^k after k bounces, so the
  // reversed run is entered with e*(-1)^(k+1): the sign flips exactly for
  // even-length runs.
  auto flip = [](int n) { return (std::abs(n) % 2 == 0) ? -n : n; };
  SignedComposition r;
  int carry = flip(c.trailing_flats);
  for (auto it = c.blocks.rbegin(); it != c.blocks.rend(); ++it) {
    r.blocks.push_back({carry, it->arcs});
    carry = flip(it->flats);
  }
  r.trailing_flats = carry;
  return r;
}

}  // namespace stadium
