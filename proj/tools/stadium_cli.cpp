// stadium_cli: reproducible experiments on the stadium billiard.
//
// Subcommands: bounds, compositions, orbit, complexity, saddles, report.
// Exit codes: 0 = all asserted checks passed, 1 = a check failed,
// 2 = usage/config error.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "stadium/combinatorics.hpp"
#include "stadium/language.hpp"
#include "stadium/saddles.hpp"
#include "stadium/util.hpp"

using json = nlohmann::ordered_json;
using namespace stadium;

namespace {

struct Options {
  double l = 2.0;
  int n_max = 8;
  long long samples = 200000;
  size_t grid = 200000;
  uint64_t seed = 1;
  double tol = 1e-10;
  int max_len = 6;
  int j_max = 40;
  std::string out;
  bool as_json = false;
  int threads = 0;

  int effective_threads() const { return threads > 0 ? threads : default_threads(); }
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--l", o.l, "flat segment length")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--tol", o.tol, "singularity/residual tolerance")
      ->check(CLI::Range(1e-300, 1e-6));
  cmd->add_option("--out", o.out, "output file (default stdout)");
  cmd->add_flag("--json", o.as_json, "emit JSON instead of CSV/text");
  cmd->add_option("--threads", o.threads, "worker threads (default: STADIUM_THREADS or cores)");
}

struct Out {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;
  explicit Out(const std::string& path) {
    if (!path.empty()) {
      file = std::make_unique<std::ofstream>(path, std::ios::binary);
      os = file.get();
    }
  }
  std::ostream& stream() { return *os; }
};

json bound_report_json(const BoundReport& rep) {
  json j;
  j["schema_version"] = 1;
  j["w"] = rep.w;
  j["w_residual"] = rep.w_residual;
  j["a"] = rep.a;
  j["pow_term"] = rep.pow_term;
  j["pow_term_identity"] = rep.pow_term_identity;
  j["final_bound"] = rep.final_bound;
  j["log_final_bound"] = rep.log_final_bound;
  j["chain_ok"] = rep.chain_ok;
  if (!rep.failure.empty()) j["failure"] = rep.failure;
  json per;
  for (const BoundPerJ& p : rep.per_j) {
    per.push_back({{"j", p.j},
                   {"x_j", p.x_j},
                   {"h_at_xj", p.h_at_xj},
                   {"max_g", p.max_g},
                   {"central_binomial_bound", p.central_binomial_bound}});
  }
  j["per_j"] = per;
  return j;
}

int cmd_bounds(const Options& o) {
  const BoundReport rep = entropy_upper_bound(o.j_max);
  Out out(o.out);
  if (o.as_json) {
    out.stream() << bound_report_json(rep).dump(2) << "\n";
  } else {
    out.stream() << "w = W(1/e)          = " << fmt_double(rep.w) << "\n"
                 << "|w e^w - 1/e|       = " << fmt_double(rep.w_residual) << "\n"
                 << "a = 2w/(1+w)        = " << fmt_double(rep.a) << "\n"
                 << "(2/a-1)^a           = " << fmt_double(rep.pow_term) << " (< 1.7454)\n"
                 << "e^{2w} cross-check  = " << fmt_double(rep.pow_term_identity) << "\n"
                 << "2(2/a-1)^a          = " << fmt_double(rep.final_bound) << " (< 3.4908)\n"
                 << "log bound           = " << fmt_double(rep.log_final_bound) << "\n"
                 << "chain inequalities  = " << (rep.chain_ok ? "ok" : rep.failure) << "\n";
  }
  return rep.chain_ok ? 0 : 1;
}

int cmd_compositions(const Options& o) {
  if (o.j_max < 1 || o.j_max > 200) {
    std::cerr << "compositions: --j-max must be in [1, 200]\n";
    return 2;
  }
  const CompositionCounts qc(o.j_max);
  bool ok = true;
  Out out(o.out);
  out.stream() << "j,k,Q_exact,Q_bound\n";
  for (int j = 1; j <= o.j_max; ++j) {
    for (int k = 1; k <= j; ++k) {
      const double bound = q_upper_bound(j, k);
      ok = ok && static_cast<double>(qc.q(j, k)) <= bound * (1.0 + 1e-9);
      out.stream() << j << ',' << k << ',' << qc.q(j, k).str() << ',' << fmt_double(bound)
                   << "\n";
    }
  }
  return ok ? 0 : 1;
}

int cmd_orbit(const Options& o, const std::string& side_name, double coord, double theta,
              int steps) {
  Side side;
  if (side_name == "L")
    side = Side::L;
  else if (side_name == "T")
    side = Side::T;
  else if (side_name == "R")
    side = Side::R;
  else if (side_name == "B")
    side = Side::B;
  else {
    std::cerr << "orbit: --side must be one of L, T, R, B\n";
    return 2;
  }
  if (std::abs(theta) >= M_PI_2) {
    std::cerr << "orbit: |theta| must be < pi/2\n";
    return 2;
  }
  StadiumTable t(o.l);
  const PhasePoint start{{side, coord}, theta};
  const Orbit orb = orbit(t, start, steps);

  Out out(o.out);
  out.stream() << "step,side,local_coord,x,y,theta,tau,flags,code\n";
  for (size_t i = 0; i < orb.steps.size(); ++i) {
    const OrbitStep& s = orb.steps[i];
    const Vec2 pos = s.point.bp.position(t);
    std::string flags;
    if (s.status == StepStatus::corner) flags += "corner;";
    if (s.status == StepStatus::tangential) flags += "tangential;";
    if (s.on_gamma_prime) flags += "gamma_prime;";
    const PointCode pc = code_point(s.point);
    std::string code = to_string(pc.primary);
    if (pc.ambiguous()) code += std::string("|") + to_string(*pc.secondary);
    out.stream() << i << ',' << to_string(s.point.bp.side) << ',' << fmt_double(s.point.bp.local)
                 << ',' << fmt_double(pos.x) << ',' << fmt_double(pos.y) << ','
                 << fmt_double(s.point.theta) << ',' << fmt_double(s.tau) << ',' << flags << ','
                 << code << "\n";
  }
  return orb.hit_singularity ? 1 : 0;
}

int cmd_complexity(const Options& o, bool quiet_summary) {
  StadiumTable t(o.l);
  SampleOptions sopt;
  sopt.threads = o.effective_threads();
  const LanguageSample ls = sample_language(t, o.n_max, o.samples, o.seed, sopt);
  const EntropyEstimate est = entropy_estimate(ls, 2, o.n_max);

  Out out(o.out);
  if (o.as_json) {
    json j;
    j["schema_version"] = 1;
    j["l"] = o.l;
    j["n_max"] = o.n_max;
    j["samples"] = o.samples;
    j["seed"] = o.seed;
    j["samples_used"] = ls.samples_used;
    j["samples_skipped"] = ls.samples_skipped;
    json rows;
    for (int n = 1; n <= o.n_max; ++n) {
      json row;
      row["n"] = n;
      row["p_hat"] = ls.p(n);
      if (n < o.n_max) row["s_hat"] = static_cast<long long>(ls.p(n + 1) - ls.p(n));
      if (n + 2 <= o.n_max) {
        const CassaigneResult c = cassaigne_residual(ls, n);
        row["num_bispecial"] = c.num_bispecial;
        row["cassaigne_residual"] = c.residual;
      }
      row["saturated"] = ls.saturated(n);
      rows.push_back(row);
    }
    j["levels"] = rows;
    j["entropy_slope"] = est.slope;
    j["analytic_bound_log"] = est.analytic_bound_log;
    j["reference_lower_log"] = est.reference_lower_log;
    json words;
    for (int n = 1; n <= std::min(6, o.n_max); ++n) {
      std::vector<std::string> ws;
      for (uint64_t w : ls.words(n)) ws.push_back(word_to_string(w, n, 6));
      std::sort(ws.begin(), ws.end());
      words[std::to_string(n)] = ws;
    }
    j["words"] = words;
    out.stream() << j.dump(2) << "\n";
  } else {
    out.stream() << "n,p_hat,s_hat,num_bispecial,cassaigne_residual,saturated\n";
    for (int n = 1; n <= o.n_max; ++n) {
      out.stream() << n << ',' << ls.p(n) << ',';
      if (n < o.n_max) out.stream() << (ls.p(n + 1) - ls.p(n));
      out.stream() << ',';
      if (n + 2 <= o.n_max) {
        const CassaigneResult c = cassaigne_residual(ls, n);
        out.stream() << c.num_bispecial << ',' << c.residual;
      } else {
        out.stream() << ',';
      }
      out.stream() << ',' << (ls.saturated(n) ? 1 : 0) << "\n";
    }
  }
  if (!quiet_summary) {
    std::cerr << "entropy slope estimate = " << fmt_double(est.slope)
              << " (analytic bound log = " << fmt_double(est.analytic_bound_log)
              << ", reference lower line = " << fmt_double(est.reference_lower_log) << ")\n";
    for (int n = 1; n <= o.n_max; ++n)
      if (!ls.saturated(n))
        std::cerr << "warning: level " << n << " not saturated; p_hat(" << n
                  << ") is a lower bound\n";
  }
  return 0;
}

json saddle_summary_json(const SaddleCensus& census, int max_len) {
  const CompositionCounts qc(max_len + 1);
  json j;
  j["schema_version"] = 1;
  json per_n;
  BigInt budget = 1;  // Q(0)
  for (int n = 1; n <= max_len; ++n) {
    json row;
    row["n"] = n;
    row["N"] = count_N(census, n);
    row["bound_36_sum_Q"] = BigInt(36 * budget).str();
    per_n.push_back(row);
    budget += qc.q_total(n);
  }
  j["per_n"] = per_n;
  j["grid_too_coarse"] = census.grid_too_coarse;
  return j;
}

int cmd_saddles(const Options& o) {
  StadiumTable t(o.l);
  SaddleSearchConfig cfg;
  cfg.max_len = o.max_len;
  cfg.grid = o.grid;
  cfg.tol = o.tol;
  cfg.threads = o.effective_threads();
  const SaddleCensus census = count_saddles(t, cfg);

  const UniquenessReport uniq = verify_uniqueness(census.connections, cfg.tol);
  const CompositionCounts qc(o.max_len + 1);
  bool bound_ok = true;
  BigInt budget = 1;
  for (int n = 1; n <= o.max_len; ++n) {
    bound_ok = bound_ok && BigInt(count_N(census, n)) <= 36 * budget;
    budget += qc.q_total(n);
  }

  Out out(o.out);
  if (o.as_json) {
    json j = saddle_summary_json(census, o.max_len);
    j["unique"] = uniq.unique;
    j["bound_ok"] = bound_ok;
    json conns;
    for (const SaddleConnection& sc : census.connections) {
      conns.push_back({{"start", to_string(sc.start)},
                       {"end", to_string(sc.end)},
                       {"code", sc.code},
                       {"length", sc.length},
                       {"weight", sc.weight},
                       {"composition", sc.composition.str()},
                       {"launch_param", sc.launch_param},
                       {"residual", sc.residual}});
    }
    j["connections"] = conns;
    out.stream() << j.dump(2) << "\n";
  } else {
    out.stream() << "start,end,code,length,weight,launch_param,residual\n";
    for (const SaddleConnection& sc : census.connections)
      out.stream() << to_string(sc.start) << ',' << to_string(sc.end) << ',' << sc.code << ','
                   << sc.length << ',' << sc.weight << ',' << fmt_double(sc.launch_param) << ','
                   << fmt_double(sc.residual) << "\n";
    std::cerr << saddle_summary_json(census, o.max_len).dump() << "\n";
    if (!uniq.unique) {
      std::cerr << "duplicate codes:\n";
      for (const DuplicateGroup& g : uniq.duplicates) std::cerr << "  " << g.code << "\n";
    }
  }
  return (uniq.unique && bound_ok) ? 0 : 1;
}

int cmd_report(const Options& o) {
  json bundle;
  bundle["schema_version"] = 1;
  bundle["config"] = {{"l", o.l},         {"n_max", o.n_max}, {"samples", o.samples},
                      {"grid", o.grid},   {"seed", o.seed},   {"tol", o.tol},
                      {"max_len", o.max_len}, {"j_max", o.j_max}};

  const BoundReport rep = entropy_upper_bound(o.j_max);
  bundle["bounds"] = bound_report_json(rep);

  const CompositionCounts qc(o.j_max);
  json qrows;
  for (int j = 1; j <= o.j_max; ++j)
    qrows.push_back({{"j", j}, {"Q", qc.q_total(j).str()}});
  bundle["compositions"] = qrows;

  StadiumTable t(o.l);
  SampleOptions sopt;
  sopt.threads = o.effective_threads();
  const LanguageSample ls = sample_language(t, o.n_max, o.samples, o.seed, sopt);
  json lang;
  for (int n = 1; n <= o.n_max; ++n)
    lang.push_back({{"n", n}, {"p_hat", ls.p(n)}, {"saturated", ls.saturated(n)}});
  bundle["language"] = {{"levels", lang},
                        {"entropy_slope", entropy_estimate(ls, 2, o.n_max).slope}};

  SaddleSearchConfig cfg;
  cfg.max_len = o.max_len;
  cfg.grid = o.grid;
  cfg.tol = o.tol;
  cfg.threads = o.effective_threads();
  const SaddleCensus census = count_saddles(t, cfg);
  const UniquenessReport uniq = verify_uniqueness(census.connections, cfg.tol);
  json sj = saddle_summary_json(census, o.max_len);
  sj["unique"] = uniq.unique;
  bundle["saddles"] = sj;

  const DefocusingReport defoc = defocusing_report(t, std::min<long long>(o.samples, 20000),
                                                   o.seed);
  bundle["defocusing"] = {{"segments", defoc.segments},
                          {"violations", defoc.violations},
                          {"marginal", defoc.marginal},
                          {"min_expansion", defoc.min_expansion}};

  Out out(o.out);
  out.stream() << bundle.dump(2) << "\n";
  return (rep.chain_ok && uniq.unique && defoc.violations == 0) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stadium billiard: symbolic dynamics, saddle connections, entropy bounds"};
  app.require_subcommand(1);

  Options o;

  CLI::App* bounds = app.add_subcommand("bounds", "analytic constants and the bound chain");
  add_common(bounds, o);
  bounds->add_option("--j-max", o.j_max, "chain-validation depth")->check(CLI::Range(2, 200));

  CLI::App* comps = app.add_subcommand("compositions", "exact Q(j,k) table with bounds");
  add_common(comps, o);
  comps->add_option("--j-max", o.j_max, "table depth")->check(CLI::Range(1, 200));

  CLI::App* orbitc = app.add_subcommand("orbit", "trace one orbit to CSV");
  add_common(orbitc, o);
  std::string side_name = "L";
  double coord = M_PI;
  double theta = 0.1;
  int steps = 20;
  orbitc->add_option("--side", side_name, "starting side: L, T, R or B");
  orbitc->add_option("--coord", coord, "local coordinate (angle on arcs, abscissa on flats)");
  orbitc->add_option("--theta", theta, "angle to the inward normal");
  orbitc->add_option("--steps", steps, "number of map applications")->check(CLI::PositiveNumber);

  CLI::App* complexity_cmd = app.add_subcommand("complexity", "sampled language statistics");
  add_common(complexity_cmd, o);
  complexity_cmd->add_option("--n-max", o.n_max, "maximum word length")->check(CLI::Range(2, 20));
  complexity_cmd->add_option("--samples", o.samples, "sample count")->check(CLI::PositiveNumber);

  CLI::App* saddles = app.add_subcommand("saddles", "saddle connection sweep and audit");
  add_common(saddles, o);
  saddles->add_option("--max-len", o.max_len, "maximum connection length")
      ->check(CLI::Range(1, 12));
  saddles->add_option("--grid", o.grid, "launch grid per family")->check(CLI::PositiveNumber);

  CLI::App* report = app.add_subcommand("report", "single JSON bundle of all analyses");
  add_common(report, o);
  report->add_option("--n-max", o.n_max, "maximum word length")->check(CLI::Range(2, 20));
  report->add_option("--samples", o.samples, "sample count")->check(CLI::PositiveNumber);
  report->add_option("--max-len", o.max_len, "maximum connection length")
      ->check(CLI::Range(1, 12));
  report->add_option("--grid", o.grid, "launch grid per family")->check(CLI::PositiveNumber);
  report->add_option("--j-max", o.j_max, "composition depth")->check(CLI::Range(10, 200));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (bounds->parsed()) return cmd_bounds(o);
    if (comps->parsed()) return cmd_compositions(o);
    if (orbitc->parsed()) return cmd_orbit(o, side_name, coord, theta, steps);
    if (complexity_cmd->parsed()) return cmd_complexity(o, false);
    if (saddles->parsed()) return cmd_saddles(o);
    if (report->parsed()) return cmd_report(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
