#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stadium/dynamics.hpp"

namespace stadium {

// Six-letter collision alphabet. Arc letters carry the sign of theta
// (Lp/Rp for theta >= 0, Lm/Rm for theta <= 0); flats carry no sign.
// Serialized as L+, L-, T, B, R+, R-.
enum class CodeLetter : uint8_t { Lp = 0, Lm = 1, T = 2, B = 3, Rp = 4, Rm = 5 };

const char* to_string(CodeLetter c);
bool is_arc_letter(CodeLetter c);
Side side_of(CodeLetter c);

// Comma-free concatenation, e.g. "L-L-R-R-" or "TBR+TB".
std::string word_string(std::span<const CodeLetter> w);

struct PointCode {
  CodeLetter primary;
  std::optional<CodeLetter> secondary;  // set exactly when |theta| <= tol on an arc
  bool ambiguous() const { return secondary.has_value(); }
};

PointCode code_point(const PhasePoint& pp);

struct CodedOrbit {
  std::vector<CodeLetter> letters;  // one per collision, starting at the seed
  bool unique = true;               // no visited point was tolerance-ambiguous
  bool singular = false;            // orbit hit a junction corner / tangency
};

// Letters of the orbit seed and its n forward images. The word is unique
// exactly when every visited point is interior to its partition element;
// otherwise it is flagged and the primary letters are reported.
CodedOrbit code_orbit(const StadiumTable& t, const PhasePoint& start, int n);

// Sixteen-letter alphabet of consecutive side pairs: the 14 realizable
// ordered pairs over {L,T,R,B} (TT and BB cannot occur) with LL and RR
// split by the common theta sign.
enum class PairLetter : uint8_t {
  LLp, LLm, RRp, RRm, LT, LB, LR, TL, TB, TR, BL, BT, BR, RL, RT, RB
};

const char* to_string(PairLetter c);

// Regroups consecutive letters and drops the sign except on LL/RR pairs,
// which keep the common variant of their letters. Output length is input
// length - 1. Throws std::invalid_argument on TT, BB, or a mixed-sign
// same-arc pair, none of which are realizable.
std::vector<PairLetter> phi_regroup(std::span<const CodeLetter> w);

// Signed composition of a collision sequence: blocks (n_i, m_i) where m_i
// counts a maximal run of hits on one semicircle and n_i the flat hits
// preceding it, signed by the transverse direction of travel in the
// flat-unfolded strip (the y velocity entering the run's first flat).
// A trailing flat run is kept separately. Weight = sum |n_i| + sum m_i +
// |trailing|, which equals the number of collisions.
struct SignedComposition {
  struct Block {
    int flats = 0;  // signed
    int arcs = 0;   // >= 1
    bool operator==(const Block&) const = default;
  };
  std::vector<Block> blocks;
  int trailing_flats = 0;

  int weight() const;
  std::string str() const;  // flattened "n1,m1,n2,m2[,trailing]", zeros kept inside
  bool operator==(const SignedComposition&) const = default;
};

struct CollisionEvent {
  bool is_arc = false;
  Side side = Side::B;
  double vy_in = 0.0;  // y velocity of the segment entering this collision
};

// Throws std::invalid_argument("empty-arc-run") when no arc collision
// occurs, unless allow_no_arc is set (corner-to-corner segments may bounce
// on flats only; their composition is a bare flat run of weight >= 0).
SignedComposition signed_composition(std::span<const CollisionEvent> events,
                                     bool allow_no_arc = false);

SignedComposition signed_composition_of_orbit(const StadiumTable& t, const Orbit& o);

// Composition of the time-reversed collision sequence: reversed block order
// with flat signs negated. Used as a property check.
SignedComposition reverse_composition(const SignedComposition& c);

}  // namespace stadium
