#pragma once

#include <string>
#include <vector>

#include "stadium/coding.hpp"

namespace stadium {

// Corner-to-corner orbit segment. The code lists the start corner symbol,
// the letters of the interior collisions, and the end corner symbol; a
// connection of length n (n flight links) has n-1 interior collisions.
// Center-corner endpoints are perpendicular arc collisions (theta = 0);
// those endpoint collisions count toward the composition weight while
// junction endpoints do not.
struct SaddleConnection {
  Corner start = Corner::b;
  Corner end = Corner::b;
  std::vector<CodeLetter> interior;
  std::string code;  // "start:letters:end", letters comma-free
  int length = 0;    // number of links
  int weight = 0;    // signed-composition weight
  SignedComposition composition;
  double launch_param = 0.0;
  double residual = 0.0;  // arc distance to the junction, or |theta| at a center hit
};

struct LaunchFamily {
  Corner corner = Corner::b;
  bool is_center = false;
  Side center_side = Side::L;  // for center families
  double lo = 0.0;             // parameter range (direction angle or arc position)
  double hi = 0.0;
};

// Junction corners launch rays from the corner point over the inward
// half-plane of directions; center corners launch the perpendicular family
// (s on the semicircle, theta = 0) parameterized by arc position. Family
// endpoints (tangential directions / junction positions) are kept off by a
// small margin.
LaunchFamily launch_family(const StadiumTable& t, Corner c);

struct SaddleSearchConfig {
  int max_len = 6;
  size_t grid = 200000;
  double tol = 1e-10;      // terminal residual tolerance
  int refine_cap = 40;     // recursive interval-splitting depth cap
  double end_margin = 1e-6;
  int threads = 1;
};

struct SaddleSearchResult {
  std::vector<SaddleConnection> connections;
  long long grid_too_coarse = 0;  // intervals abandoned at the refinement cap
  long long bisect_failures = 0;
};

// Sweeps the launch parameter on a uniform grid, detects corner events
// (junction crossings of the i-th collision and theta sign changes at arc
// collisions) between neighbours with matching code prefixes, and bisects
// each event to the residual tolerance. Adjacent grid points whose codes
// differ in more than one position are split recursively. Connections with
// a corner visit in their interior are composite and dropped.
SaddleSearchResult find_saddles(const StadiumTable& t, Corner c, const SaddleSearchConfig& cfg);

struct SaddleCensus {
  std::vector<SaddleConnection> connections;  // deduplicated, all corners
  std::vector<long long> n_by_length;         // n_by_length[i] = N(i+1), cumulative
  std::vector<long long> count_by_weight;     // count_by_weight[j] = #connections of weight j
  long long grid_too_coarse = 0;
  long long bisect_failures = 0;
};

// Union of find_saddles over all six corners, distinct by (start, end, code).
SaddleCensus count_saddles(const StadiumTable& t, const SaddleSearchConfig& cfg);

// N(n): number of distinct saddle connections of length at most n.
long long count_N(const SaddleCensus& census, int n);

struct DuplicateGroup {
  std::string code;
  std::vector<double> params;
};

struct UniquenessReport {
  bool unique = true;
  std::vector<DuplicateGroup> duplicates;
};

// True iff every (start, end, code) class has multiplicity one after merging
// launch parameters closer than 10*tol.
UniquenessReport verify_uniqueness(const std::vector<SaddleConnection>& sc, double tol = 1e-10);

// Re-simulates a connection from its family and launch parameter; returns
// the terminal residual (and the re-traced code via out parameter if given).
double resimulate_connection(const StadiumTable& t, const SaddleConnection& sc,
                             std::string* code_out = nullptr);

SignedComposition saddle_signed_composition(const SaddleConnection& sc);

}  // namespace stadium
