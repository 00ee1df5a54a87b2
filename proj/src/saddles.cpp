#include "stadium/saddles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "stadium/util.hpp"

namespace stadium {

LaunchFamily launch_family(const StadiumTable& t, Corner c) {
  (void)t;
  LaunchFamily f;
  f.corner = c;
  const double m = 1e-6;
  switch (c) {
    case Corner::b:  // inward directions have d_y < 0 at the top corners
    case Corner::r:
      f.lo = -M_PI + m;
      f.hi = -m;
      break;
    case Corner::p:
    case Corner::g:
      f.lo = m;
      f.hi = M_PI - m;
      break;
    case Corner::cL:
      f.is_center = true;
      f.center_side = Side::L;
      f.lo = M_PI_2 + m;
      f.hi = 3.0 * M_PI_2 - m;
      break;
    case Corner::cR:
      f.is_center = true;
      f.center_side = Side::R;
      f.lo = -M_PI_2 + m;
      f.hi = M_PI_2 - m;
      break;
  }
  return f;
}

namespace {

struct Rec {
  Side side;
  double local;
  double s;  // global arc coordinate
  double theta;
  double tau;
  double vy_in;
  bool at_junction;
  bool tangential;
};

struct Trace {
  std::vector<Rec> rec;
  bool aborted_corner = false;
  bool aborted_tangential = false;
};

Trace trace_family(const StadiumTable& t, const LaunchFamily& f, double param,
                   int max_collisions) {
  Trace tr;
  tr.rec.reserve(static_cast<size_t>(max_collisions));
  Vec2 pos, dir;
  if (f.is_center) {
    const PhasePoint start{{f.center_side, param}, 0.0};
    pos = start.bp.position(t);
    dir = velocity(t, start);
  } else {
    pos = t.corner_position(f.corner);
    dir = unit_vector(param);
  }
  for (int k = 0; k < max_collisions; ++k) {
    const FlightSegment seg = next_collision(t, pos, dir);
    const Vec2 n = seg.end.inward_normal(t);
    const double vn = dir.dot(n);
    if (vn >= 0.0) {
      tr.aborted_tangential = true;
      break;
    }
    const Vec2 out = dir - n * (2.0 * vn);
    Rec r;
    r.side = seg.end.side;
    r.local = seg.end.local;
    r.s = seg.end.arc_coord(t);
    r.theta = signed_angle(n, out);
    r.tau = seg.tau;
    r.vy_in = dir.y;
    r.at_junction = seg.end.junction_distance(t) < kSingularTol;
    r.tangential = (M_PI_2 - std::abs(r.theta)) <= kSingularTol;
    tr.rec.push_back(r);
    if (r.at_junction) {
      tr.aborted_corner = true;
      break;
    }
    if (r.tangential) {
      tr.aborted_tangential = true;
      break;
    }
    pos = seg.end.position(t);
    dir = out;
  }
  return tr;
}

bool arc_side(Side s) { return s == Side::L || s == Side::R; }
int theta_sign(double th) { return th >= 0.0 ? 1 : -1; }

struct Event {
  int index;  // 0-based record index; terminal collision of a length index+1 connection
  enum Kind { junction, center, mismatch } kind;
};

std::vector<Event> diff_events(const Trace& A, const Trace& B) {
  std::vector<Event> ev;
  const size_t m = std::min(A.rec.size(), B.rec.size());
  for (size_t i = 0; i < m; ++i) {
    const Rec& a = A.rec[i];
    const Rec& b = B.rec[i];
    if (a.side != b.side)
      ev.push_back({static_cast<int>(i), Event::junction});
    else if (arc_side(a.side) && theta_sign(a.theta) != theta_sign(b.theta))
      ev.push_back({static_cast<int>(i), Event::center});
  }
  if (ev.empty() && A.rec.size() != B.rec.size() && !A.aborted_corner && !B.aborted_corner)
    ev.push_back({static_cast<int>(m), Event::mismatch});
  return ev;
}

std::optional<Corner> shared_junction(Side x, Side y) {
  auto has = [](Side a, Side b, Side u, Side v) {
    return (a == u && b == v) || (a == v && b == u);
  };
  if (has(x, y, Side::T, Side::L)) return Corner::b;
  if (has(x, y, Side::L, Side::B)) return Corner::p;
  if (has(x, y, Side::B, Side::R)) return Corner::g;
  if (has(x, y, Side::R, Side::T)) return Corner::r;
  return std::nullopt;
}

CodeLetter letter_of(const Rec& r) {
  switch (r.side) {
    case Side::T: return CodeLetter::T;
    case Side::B: return CodeLetter::B;
    case Side::L: return r.theta >= 0 ? CodeLetter::Lp : CodeLetter::Lm;
    case Side::R: return r.theta >= 0 ? CodeLetter::Rp : CodeLetter::Rm;
  }
  return CodeLetter::T;
}

struct SearchContext {
  const StadiumTable& t;
  LaunchFamily fam;
  SaddleSearchConfig cfg;
  std::vector<SaddleConnection>* out;
  long long grid_too_coarse = 0;
  long long bisect_failures = 0;
};

std::string make_code(Corner start, std::span<const CodeLetter> interior, Corner end) {
  std::string s = to_string(start);
  s += ':';
  s += word_string(interior);
  s += ':';
  s += to_string(end);
  return s;
}

// Builds and stores the connection whose terminal collision is rec[i].
// Returns false when the segment is composite (interior corner visit).
bool record_connection(SearchContext& ctx, const Trace& tr, int i, Corner end_corner,
                       double param, double residual) {
  for (int k = 0; k < i; ++k) {
    const Rec& r = tr.rec[static_cast<size_t>(k)];
    if (r.at_junction) return false;
    if (arc_side(r.side) && std::abs(r.theta) <= ctx.cfg.tol) return false;
  }
  const bool end_center = !is_junction(end_corner);
  if (end_center && tr.rec[static_cast<size_t>(i)].at_junction) return false;

  SaddleConnection sc;
  sc.start = ctx.fam.corner;
  sc.end = end_corner;
  sc.length = i + 1;
  sc.launch_param = param;
  sc.residual = residual;
  sc.interior.reserve(static_cast<size_t>(i));
  std::vector<CollisionEvent> ev;
  if (ctx.fam.is_center) ev.push_back({true, ctx.fam.center_side, 0.0});
  for (int k = 0; k < i; ++k) {
    const Rec& r = tr.rec[static_cast<size_t>(k)];
    sc.interior.push_back(letter_of(r));
    ev.push_back({arc_side(r.side), r.side, r.vy_in});
  }
  if (end_center) {
    const Rec& r = tr.rec[static_cast<size_t>(i)];
    ev.push_back({true, r.side, r.vy_in});
  }
  sc.code = make_code(sc.start, sc.interior, sc.end);
  sc.composition = signed_composition(ev, /*allow_no_arc=*/true);
  sc.weight = sc.composition.weight();
  ctx.out->push_back(std::move(sc));
  return true;
}

// Bisects one simple event inside (ta, tb). Returns true when handled
// (recorded, or converged but rejected as composite).
bool bisect_event(SearchContext& ctx, double ta, const Trace& A, double tb, const Trace& B,
                  const Event& ev) {
  const int i = ev.index;
  const StadiumTable& t = ctx.t;
  const double period = t.perimeter();

  Corner end_corner = Corner::b;
  double s_junction = 0.0;
  if (ev.kind == Event::junction) {
    const auto j = shared_junction(A.rec[static_cast<size_t>(i)].side,
                                   B.rec[static_cast<size_t>(i)].side);
    if (!j) return false;  // sides not adjacent: something jumped, refine
    end_corner = *j;
    s_junction = t.corner_arc_coord(*j);
  }

  auto eval = [&](const Trace& tr) -> std::optional<double> {
    if (tr.rec.size() < static_cast<size_t>(i + 1)) return std::nullopt;
    for (int k = 0; k < i; ++k)
      if (tr.rec[static_cast<size_t>(k)].side != A.rec[static_cast<size_t>(k)].side)
        return std::nullopt;
    if (ev.kind == Event::center) {
      if (tr.rec[static_cast<size_t>(i)].side != A.rec[static_cast<size_t>(i)].side)
        return std::nullopt;
      return tr.rec[static_cast<size_t>(i)].theta;
    }
    return wrap_signed(tr.rec[static_cast<size_t>(i)].s - s_junction, period);
  };

  const auto ga = eval(A);
  const auto gb = eval(B);
  if (!ga || !gb || (theta_sign(*ga) == theta_sign(*gb))) return false;
  const int sign_a = theta_sign(*ga);

  double lo = ta, hi = tb;
  Trace best;
  double best_param = 0.0;
  double best_res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    Trace M = trace_family(t, ctx.fam, mid, i + 1);
    const auto gm = eval(M);
    if (!gm) return false;
    if (std::abs(*gm) < best_res) {
      best_res = std::abs(*gm);
      best = std::move(M);
      best_param = mid;
    }
    if (theta_sign(*gm) == sign_a)
      lo = mid;
    else
      hi = mid;
    if (best_res < ctx.cfg.tol * 1e-3) break;
  }
  if (best_res >= ctx.cfg.tol) {
    ++ctx.bisect_failures;
    return true;  // no root to the required residual (e.g. a grazing fold); treated as handled
  }
  if (ev.kind == Event::center)
    end_corner = best.rec[static_cast<size_t>(i)].side == Side::L ? Corner::cL : Corner::cR;
  record_connection(ctx, best, i, end_corner, best_param, best_res);
  return true;
}

void process_pair(SearchContext& ctx, double ta, const Trace& A, double tb, const Trace& B,
                  int depth) {
  const std::vector<Event> events = diff_events(A, B);
  if (events.empty()) return;
  if (events.size() == 1 && events[0].kind != Event::mismatch) {
    if (bisect_event(ctx, ta, A, tb, B, events[0])) return;
  }
  if (depth >= ctx.cfg.refine_cap || tb - ta < 1e-14) {
    ++ctx.grid_too_coarse;
    return;
  }
  const double tm = 0.5 * (ta + tb);
  const Trace M = trace_family(ctx.t, ctx.fam, tm, ctx.cfg.max_len);
  process_pair(ctx, ta, A, tm, M, depth + 1);
  process_pair(ctx, tm, M, tb, B, depth + 1);
}

}  // namespace

SaddleSearchResult find_saddles(const StadiumTable& t, Corner c, const SaddleSearchConfig& cfg) {
  if (cfg.grid < 10) throw std::invalid_argument("find_saddles: grid too small");
  if (cfg.max_len < 1) throw std::invalid_argument("find_saddles: max_len must be >= 1");
  const LaunchFamily fam = launch_family(t, c);
  const size_t n = cfg.grid;
  auto param_at = [&](size_t i) {
    return fam.lo + (fam.hi - fam.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };

  const int threads = std::max(1, cfg.threads);
  const size_t n_chunks = std::min<size_t>(static_cast<size_t>(threads) * 8, n - 1);
  struct ChunkOut {
    std::vector<SaddleConnection> conns;
    long long coarse = 0;
    long long fails = 0;
  };
  std::vector<ChunkOut> outs(n_chunks);

  parallel_chunks(n_chunks, threads, [&](size_t chunk) {
    const size_t pair_lo = (n - 1) * chunk / n_chunks;
    const size_t pair_hi = (n - 1) * (chunk + 1) / n_chunks;
    SearchContext ctx{t, fam, cfg, &outs[chunk].conns};
    Trace prev = trace_family(t, fam, param_at(pair_lo), cfg.max_len);
    for (size_t i = pair_lo; i < pair_hi; ++i) {
      // A grid point landing within tolerance of a corner is already a root.
      if (prev.aborted_corner) {
        const int idx = static_cast<int>(prev.rec.size()) - 1;
        const Rec& r = prev.rec.back();
        for (Corner cj : {Corner::b, Corner::p, Corner::g, Corner::r}) {
          const double d =
              std::abs(wrap_signed(r.s - t.corner_arc_coord(cj), t.perimeter()));
          if (d < cfg.tol) record_connection(ctx, prev, idx, cj, param_at(i), d);
        }
      }
      Trace cur = trace_family(t, fam, param_at(i + 1), cfg.max_len);
      process_pair(ctx, param_at(i), prev, param_at(i + 1), cur, 0);
      prev = std::move(cur);
    }
    outs[chunk].coarse = ctx.grid_too_coarse;
    outs[chunk].fails = ctx.bisect_failures;
  });

  SaddleSearchResult res;
  for (const ChunkOut& o : outs) {
    res.grid_too_coarse += o.coarse;
    res.bisect_failures += o.fails;
    res.connections.insert(res.connections.end(), o.conns.begin(), o.conns.end());
  }

  // Merge rediscoveries of the same root: identical code with launch
  // parameters closer than 10*tol. Distinct parameters are kept so that
  // verify_uniqueness can see genuine duplicates.
  std::map<std::string, std::vector<SaddleConnection>> by_code;
  for (SaddleConnection& sc : res.connections) by_code[sc.code].push_back(std::move(sc));
  res.connections.clear();
  for (auto& [code, group] : by_code) {
    std::sort(group.begin(), group.end(),
              [](const SaddleConnection& a, const SaddleConnection& b) {
                return a.launch_param < b.launch_param;
              });
    size_t cluster_start = 0;
    for (size_t i = 0; i <= group.size(); ++i) {
      if (i == group.size() ||
          (i > cluster_start && group[i].launch_param - group[i - 1].launch_param > 10 * cfg.tol)) {
        auto best = std::min_element(group.begin() + static_cast<long>(cluster_start),
                                     group.begin() + static_cast<long>(i),
                                     [](const SaddleConnection& a, const SaddleConnection& b) {
                                       return a.residual < b.residual;
                                     });
        res.connections.push_back(*best);
        cluster_start = i;
      }
    }
  }
  std::sort(res.connections.begin(), res.connections.end(),
            [](const SaddleConnection& a, const SaddleConnection& b) {
              if (a.length != b.length) return a.length < b.length;
              if (a.code != b.code) return a.code < b.code;
              return a.launch_param < b.launch_param;
            });
  return res;
}

SaddleCensus count_saddles(const StadiumTable& t, const SaddleSearchConfig& cfg) {
  SaddleCensus census;
  for (Corner c : {Corner::b, Corner::p, Corner::g, Corner::r, Corner::cL, Corner::cR}) {
    SaddleSearchResult r = find_saddles(t, c, cfg);
    census.grid_too_coarse += r.grid_too_coarse;
    census.bisect_failures += r.bisect_failures;
    census.connections.insert(census.connections.end(),
                              std::make_move_iterator(r.connections.begin()),
                              std::make_move_iterator(r.connections.end()));
  }
  census.n_by_length.assign(static_cast<size_t>(cfg.max_len), 0);
  for (const SaddleConnection& sc : census.connections) {
    for (int len = sc.length; len <= cfg.max_len; ++len)
      ++census.n_by_length[static_cast<size_t>(len - 1)];
    if (static_cast<size_t>(sc.weight) >= census.count_by_weight.size())
      census.count_by_weight.resize(static_cast<size_t>(sc.weight) + 1, 0);
    ++census.count_by_weight[static_cast<size_t>(sc.weight)];
  }
  return census;
}

long long count_N(const SaddleCensus& census, int n) {
  if (n < 1) return 0;
  const size_t idx = std::min(census.n_by_length.size(), static_cast<size_t>(n)) - 1;
  if (census.n_by_length.empty()) return 0;
  return census.n_by_length[idx];
}

UniquenessReport verify_uniqueness(const std::vector<SaddleConnection>& sc, double tol) {
  std::map<std::string, std::vector<double>> by_code;
  for (const SaddleConnection& c : sc) by_code[c.code].push_back(c.launch_param);
  UniquenessReport rep;
  for (auto& [code, params] : by_code) {
    std::sort(params.begin(), params.end());
    size_t clusters = 1;
    for (size_t i = 1; i < params.size(); ++i)
      if (params[i] - params[i - 1] > 10 * tol) ++clusters;
    if (clusters > 1) {
      rep.unique = false;
      rep.duplicates.push_back({code, params});
    }
  }
  return rep;
}

double resimulate_connection(const StadiumTable& t, const SaddleConnection& sc,
                             std::string* code_out) {
  const LaunchFamily fam = launch_family(t, sc.start);
  const Trace tr = trace_family(t, fam, sc.launch_param, sc.length);
  if (tr.rec.size() < static_cast<size_t>(sc.length))
    return std::numeric_limits<double>::infinity();
  const Rec& last = tr.rec[static_cast<size_t>(sc.length - 1)];
  double residual;
  if (is_junction(sc.end)) {
    residual = std::abs(wrap_signed(last.s - t.corner_arc_coord(sc.end), t.perimeter()));
  } else {
    residual = std::abs(last.theta);
  }
  if (code_out) {
    std::vector<CodeLetter> interior;
    for (int k = 0; k + 1 < sc.length; ++k)
      interior.push_back(letter_of(tr.rec[static_cast<size_t>(k)]));
    *code_out = make_code(sc.start, interior, sc.end);
  }
  return residual;
}

SignedComposition saddle_signed_composition(const SaddleConnection& sc) { return sc.composition; }

}  // namespace stadium
