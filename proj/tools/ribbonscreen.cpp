// Command-line toolkit for grid homology, cyclic branched-cover generator
// counts, Perron-Frobenius dilatations, explicit volume/dilatation bounds,
// and ribbon-concordance predecessor screening.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "ribbon/bounds.hpp"
#include "ribbon/cover.hpp"
#include "ribbon/dynamics.hpp"
#include "ribbon/grid.hpp"
#include "ribbon/hfk.hpp"
#include "ribbon/report.hpp"
#include "ribbon/screen.hpp"

namespace {

// exit codes, one per error class
constexpr int kOk = 0;
constexpr int kParseError = 1;
constexpr int kCeilingError = 2;
constexpr int kConsistencyError = 3;
constexpr int kNotPrimitive = 4;
constexpr int kMissingTarget = 5;
constexpr int kUsageError = 64;

struct CommonFlags {
  std::string format = "human";
  int workers = 1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--format", flags.format, "output format: human or json")
      ->check(CLI::IsMember({"human", "json"}));
  cmd->add_option("--workers", flags.workers, "worker thread count")->check(CLI::PositiveNumber);
}

void emit(const CommonFlags& flags, const std::string& text, const rib::report::Json& json) {
  if (flags.format == "json")
    std::cout << rib::report::dump(json);
  else
    std::cout << text;
}

int run_homology(const std::string& path, int ceiling, bool check, const CommonFlags& flags) {
  auto g = rib::grid::load_grid_file(path);
  if (!g.is_knot()) {
    std::cerr << "error: grid presents a link with " << g.component_count()
              << " components; homology tables require a knot\n";
    return kParseError;
  }
  rib::hfk::HomologyOptions opts{ceiling, flags.workers};
  if (check) {
    long long failure = rib::hfk::find_d_squared_failure(g, opts);
    if (failure >= 0) {
      std::cerr << "error: differential does not square to zero at state " << failure << "\n";
      return kConsistencyError;
    }
  }
  rib::report::HomologyResult result{g,
                                     rib::hfk::homology_tilde(g, opts),
                                     {},
                                     {},
                                     {}};
  result.hat = rib::hfk::hat_from_tilde(result.tilde, g.size());
  result.fiberedness = rib::hfk::genus_and_fiberedness(result.hat);
  result.alexander = rib::hfk::alexander_polynomial(result.hat);
  // Alexander symmetry of the hat table; grading corruption otherwise.
  for (const auto& [key, d] : result.hat.entries)
    if (result.hat.dim(key.first - 2 * key.second, -key.second) != d)
      throw rib::hfk::ConsistencyError("hat table breaks Alexander symmetry");
  emit(flags, rib::report::homology_text(result), rib::report::homology_json(result));
  return kOk;
}

int run_cover(const std::string& path, int sheets, int permanent_ceiling, bool homology,
              long long max_generators, const CommonFlags& flags) {
  auto g = rib::grid::load_grid_file(path);
  auto d = rib::cover::build_cover(g, sheets);
  rib::report::CoverResult result;
  result.delta = g.size();
  result.sheets = sheets;
  result.count = rib::cover::count_generators(d, {permanent_ceiling, flags.workers});
  result.dim_bound = rib::cover::dimension_bound(g.size(), sheets);
  if (result.count.exact.has_value())
    result.bound_satisfied = mpq_class(*result.count.exact) <= result.count.bregman_bound;
  if (homology) {
    rib::cover::CoverHomologyOptions hopts;
    hopts.max_generators = max_generators;
    hopts.workers = flags.workers;
    result.homology = rib::cover::cover_homology_experimental(d, hopts);
  }
  emit(flags, rib::report::cover_text(result), rib::report::cover_json(result));
  return kOk;
}

int run_dilatation(const std::string& path, double tol, double trace_tol, int n_max,
                   const CommonFlags& flags) {
  auto m = rib::dyn::load_matrix_file(path);
  rib::report::DilatationResult result;
  result.size = m.size();
  result.estimate = rib::dyn::trace_limit_check(m, n_max, trace_tol, tol);
  emit(flags, rib::report::dilatation_text(result), rib::report::dilatation_json(result));
  return kOk;
}

double need(const std::map<std::string, double>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw CLI::ValidationError("bounds", "missing parameter '" + key + "'");
  return it->second;
}

int run_bounds(const std::string& name, const std::vector<std::string>& params,
               std::optional<double> measured, const CommonFlags& flags) {
  std::map<std::string, double> kv;
  for (const auto& p : params) {
    size_t eq = p.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("bounds", "parameters take the form key=value, got '" + p + "'");
    try {
      kv[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("bounds", "bad numeric value in '" + p + "'");
    }
  }
  auto as_int = [&](const std::string& key) { return static_cast<int>(need(kv, key)); };

  if (name == "volume-chain-audit") {
    auto lines = rib::bounds::volume_chain_audit(as_int("gJ"), as_int("gK"), need(kv, "lambdaJ"),
                                                 need(kv, "lambdaK"), need(kv, "b"),
                                                 need(kv, "volJ"), need(kv, "volK"));
    emit(flags, rib::report::chain_audit_text(lines), rib::report::chain_audit_json(lines));
    for (const auto& line : lines)
      if (line.violated) return kConsistencyError;
    return kOk;
  }
  if (name == "kojima-entropy-check") {
    bool ok = rib::bounds::kojima_entropy_bound_check(need(kv, "lambda"), need(kv, "b"),
                                                      need(kv, "vol"));
    rib::report::Json j;
    j["schema"] = rib::report::kSchema;
    j["command"] = "bounds";
    j["bound"] = name;
    j["satisfied"] = ok;
    emit(flags, std::string("satisfied ") + (ok ? "true" : "false") + "\n", j);
    return kOk;
  }

  rib::bounds::BoundReport report;
  if (name == "dilatation-arc") {
    report = rib::bounds::dilatation_arc_bound(as_int("delta"));
  } else if (name == "eq1-rhs") {
    report.name = "eq1-rhs";
    int delta = as_int("delta"), n = as_int("n");
    report.inputs = {{"delta", std::to_string(delta)}, {"n", std::to_string(n)}};
    report.bound = rib::bounds::eq1_rhs(delta, n);
  } else if (name == "volume-arc") {
    report = rib::bounds::volume_arc_bound(as_int("g"), as_int("delta"));
  } else if (name == "entropy-relation") {
    report = rib::bounds::entropy_relation_bound(need(kv, "lambda"), as_int("g"));
  } else if (name == "cornish-growth") {
    report.name = "cornish-growth";
    report.bound = rib::bounds::cornish_growth_bound(need(kv, "c"), need(kv, "lambda"),
                                                     as_int("g"), as_int("n"));
    report.inputs = {{"c", rib::report::fmt_double(need(kv, "c"))},
                     {"lambda", rib::report::fmt_double(need(kv, "lambda"))},
                     {"g", std::to_string(as_int("g"))},
                     {"n", std::to_string(as_int("n"))}};
  } else if (name == "kojima-mcshane") {
    report = rib::bounds::kojima_mcshane_bound(as_int("g"), need(kv, "lambda"));
  } else if (name == "volume-ratio") {
    report.name = "volume-ratio";
    report.bound = rib::bounds::volume_ratio_constant(as_int("g"), need(kv, "b"));
    report.inputs = {{"g", std::to_string(as_int("g"))},
                     {"b", rib::report::fmt_double(need(kv, "b"))}};
  } else {
    throw CLI::ValidationError("bounds", "unknown bound '" + name + "'");
  }
  if (measured) rib::bounds::attach_measured(report, *measured);
  emit(flags, rib::report::bound_text(report), rib::report::bound_json(report));
  return kOk;
}

int run_screen(const std::string& db_path, const std::string& target, std::optional<double> b,
               bool experimental, int ceiling, const CommonFlags& flags) {
  auto db = rib::screen::load_database_file(db_path);
  rib::screen::ScreenOptions opts;
  opts.b = b;
  opts.experimental_cover_rule = experimental;
  opts.homology_ceiling = ceiling;
  opts.workers = flags.workers;

  std::vector<rib::screen::KnotRecord> enriched;
  enriched.reserve(db.size());
  for (const auto& record : db) enriched.push_back(rib::screen::enrich_record(record, opts));

  auto target_it = std::find_if(enriched.begin(), enriched.end(),
                                [&](const auto& r) { return r.name == target; });
  if (target_it == enriched.end()) {
    std::cerr << "error: target '" << target << "' not present in the database\n";
    return kMissingTarget;
  }
  rib::report::ScreenResult result;
  result.target = target;
  result.verdicts = rib::screen::screen_database(*target_it, enriched, opts);
  emit(flags, rib::report::screen_text(result), rib::report::screen_json(result));
  return kOk;
}

// ---- selftest ----------------------------------------------------------

struct SelfTest {
  int failures = 0;
  void check(bool ok, const std::string& what) {
    std::cout << (ok ? "pass " : "FAIL ") << what << "\n";
    if (!ok) ++failures;
  }
};

rib::grid::GridDiagram random_grid(std::mt19937_64& rng, int size) {
  std::vector<int> xs(static_cast<size_t>(size)), os(static_cast<size_t>(size));
  std::iota(xs.begin(), xs.end(), 0);
  while (true) {
    std::shuffle(xs.begin(), xs.end(), rng);
    std::shuffle(os.begin(), os.end(), rng);
    std::iota(os.begin(), os.end(), 0);
    std::shuffle(os.begin(), os.end(), rng);
    bool collision = false;
    for (size_t c = 0; c < xs.size(); ++c)
      if (xs[c] == os[c]) collision = true;
    if (!collision) return rib::grid::GridDiagram(xs, os);
  }
}

int run_selftest(int ceiling, int grids_per_size, bool inject_bug, const std::string& db_path,
                 const CommonFlags& flags) {
  SelfTest st;
  std::mt19937_64 rng(0x5eed5eedULL);
  rib::hfk::HomologyOptions opts{ceiling, flags.workers};

  // corpus grids
  std::vector<std::pair<std::string, rib::grid::GridDiagram>> corpus = {
      {"unknot", rib::grid::parse_grid("2\nX: 1 0\nO: 0 1")},
      {"trefoil", rib::grid::parse_grid("5\nX: 2 3 4 0 1\nO: 0 1 2 3 4")},
      {"figure-eight", rib::grid::parse_grid("6\nX: 2 0 5 3 4 1\nO: 5 4 1 0 2 3")},
  };

  for (const auto& [name, g] : corpus) {
    if (g.size() > ceiling) continue;
    st.check(rib::hfk::find_d_squared_failure(g, opts) == -1, "d^2 = 0 on " + name);
  }
  for (int size = 2; size <= std::min(6, ceiling); ++size) {
    bool all = true;
    for (int i = 0; i < grids_per_size; ++i)
      if (rib::hfk::find_d_squared_failure(random_grid(rng, size), opts) != -1) all = false;
    st.check(all, "d^2 = 0 on " + std::to_string(grids_per_size) + " random grids of size " +
                      std::to_string(size));
  }

  // differential degree and grading structure, with the optional injected bug
  {
    auto g = corpus[1].second;
    auto states = rib::hfk::enumerate_states(g, opts);
    bool degree_ok = true;
    for (size_t s = 0; s < states.size(); s += 5) {
      auto state = states[s];
      if (inject_bug) state.maslov += 1;  // negative control
      for (const auto& y : rib::hfk::differential(g, state))
        if (y.maslov != state.maslov - 1 || y.alexander2 != state.alexander2) degree_ok = false;
    }
    st.check(degree_ok, "differential drops maslov by 1 and preserves alexander");
  }

  // homology invariants on the corpus plus 5_2
  {
    auto five_two = rib::grid::parse_grid("7\nX: 0 6 1 2 3 4 5\nO: 4 2 5 0 6 1 3");
    std::vector<std::pair<std::string, rib::grid::GridDiagram>> knots = corpus;
    knots.push_back({"5_2", five_two});
    for (const auto& [name, g] : knots) {
      if (g.size() > ceiling) continue;
      auto tilde = rib::hfk::homology_tilde(g, opts);
      auto hat = rib::hfk::hat_from_tilde(tilde, g.size());
      st.check(tilde.total() == hat.total() << (g.size() - 1),
               "tilde/hat dimension relation on " + name);
      bool symmetric = true;
      for (const auto& [key, d] : hat.entries)
        if (hat.dim(key.first - 2 * key.second, -key.second) != d) symmetric = false;
      st.check(symmetric, "hat Alexander symmetry on " + name);
      auto poly = rib::hfk::alexander_polynomial(hat);
      st.check(poly.eval_at_one() == 1, "alexander normalization on " + name);
      auto fib = rib::hfk::genus_and_fiberedness(hat);
      if (fib.fibered)
        st.check(poly.degree() == fib.genus, "alexander degree equals genus on fibered " + name);
    }
  }

  // covers and permanents
  {
    bool counts_ok = true, bounds_ok = true;
    for (const auto& [name, g] : corpus) {
      if (g.size() > 5) continue;
      for (int n = 1; n <= 2; ++n) {
        auto d = rib::cover::build_cover(g, n);
        auto count = rib::cover::count_generators(d, {24, flags.workers});
        if (!count.exact.has_value()) counts_ok = false;
        if (count.exact.has_value() && mpq_class(*count.exact) > count.bregman_bound)
          bounds_ok = false;
        if (n == 1) {
          mpz_class fact = 1;
          for (int i = 2; i <= g.size(); ++i) fact *= i;
          if (*count.exact != fact) counts_ok = false;
        }
      }
    }
    st.check(counts_ok, "cover generator counts at n = 1 equal delta!");
    st.check(bounds_ok, "cover generator counts within (delta!)^n");

    bool permanent_ok = true;
    for (int k = 2; k <= 6; ++k) {
      std::vector<std::vector<long long>> m(static_cast<size_t>(k),
                                            std::vector<long long>(static_cast<size_t>(k)));
      for (auto& row : m)
        for (auto& v : row) v = static_cast<long long>(rng() % 3);
      std::vector<int> perm(static_cast<size_t>(k));
      std::iota(perm.begin(), perm.end(), 0);
      mpz_class brute = 0;
      do {
        mpz_class p = 1;
        for (int i = 0; i < k; ++i)
          p *= static_cast<long>(m[static_cast<size_t>(i)][static_cast<size_t>(perm[static_cast<size_t>(i)])]);
        brute += p;
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (rib::cover::permanent(m, flags.workers) != brute) permanent_ok = false;
    }
    st.check(permanent_ok, "permanent agrees with all-permutations enumeration");
  }

  // dynamics
  {
    auto fig8 = rib::dyn::PFMatrix({{2, 1}, {1, 1}});
    auto est = rib::dyn::spectral_radius(fig8, 1e-9);
    double expected = (3 + std::sqrt(5.0)) / 2;
    st.check(est.upper - est.lower < 1e-9 && est.lower <= expected && expected <= est.upper,
             "collatz-wielandt interval brackets (3+sqrt5)/2");
    auto tl = rib::dyn::trace_limit_check(fig8, 40);
    st.check(tl.trace_converged && tl.final_trace_gap < 1e-6, "trace limit converges by n = 40");
    st.check(!rib::dyn::is_primitive(rib::dyn::PFMatrix({{0, 1}, {1, 0}})),
             "permutation matrix is not primitive");
  }

  // bounds identities
  {
    bool identity_ok = true;
    for (int g = 1; g <= 4; ++g)
      for (int delta = 2; delta <= 10; ++delta) {
        double fact = 1;
        for (int i = 2; i <= delta; ++i) fact *= i;
        auto lhs = rib::bounds::volume_arc_bound(g, delta).bound;
        auto rhs = rib::bounds::kojima_mcshane_bound(g, fact).bound;
        if (lhs.lo != rhs.lo || lhs.hi != rhs.hi) identity_ok = false;
      }
    st.check(identity_ok, "volume-arc equals kojima-mcshane at lambda = delta!");

    bool monotone_ok = true;
    for (int e = 0; e < 10; ++e)
      if (rib::bounds::eq1_rhs(5, 1 << (e + 1)).lo <= rib::bounds::eq1_rhs(5, 1 << e).hi)
        monotone_ok = false;
    st.check(monotone_ok, "eq1 rhs increases strictly along powers of two");
  }

  // screening reflexivity on the demo database
  {
    bool loaded = false, reflexive = true;
    try {
      auto db = rib::screen::load_database_file(db_path);
      rib::screen::ScreenOptions sopts;
      sopts.homology_ceiling = std::max(ceiling, 7);
      sopts.workers = flags.workers;
      for (const auto& record : db) {
        auto enriched = rib::screen::enrich_record(record, sopts);
        auto verdict = rib::screen::screen_pair(enriched, enriched, sopts);
        if (verdict.overall == rib::screen::Overall::Excluded) reflexive = false;
      }
      loaded = true;
    } catch (const std::exception& e) {
      std::cout << "note: demo database unavailable (" << e.what() << ")\n";
    }
    if (loaded) st.check(reflexive, "screening is reflexive on the demo database");
  }

  std::cout << (st.failures == 0 ? "selftest passed\n"
                                 : "selftest FAILED (" + std::to_string(st.failures) + ")\n");
  return st.failures == 0 ? kOk : kConsistencyError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grid homology, branched-cover counts, dilatations, and ribbon-concordance screening"};
  app.require_subcommand(1);

  CommonFlags flags;

  // homology
  auto* homology = app.add_subcommand("homology", "knot Floer homology of a grid diagram");
  std::string homology_path;
  int homology_ceiling = rib::hfk::kDefaultCeiling;
  bool homology_check = false;
  homology->add_option("grid", homology_path, "grid file")->required();
  homology->add_option("--ceiling", homology_ceiling, "largest grid size allowed")
      ->check(CLI::PositiveNumber);
  homology->add_flag("--check", homology_check, "verify d^2 = 0 before computing");
  add_common(homology, flags);

  // cover
  auto* cover = app.add_subcommand("cover", "cyclic branched-cover diagram and generator count");
  std::string cover_path;
  int sheets = 1, permanent_ceiling = 24;
  long long max_generators = 200000;
  bool cover_homology = false;
  cover->add_option("grid", cover_path, "grid file")->required();
  cover->add_option("--sheets,-n", sheets, "cover degree n")->required()->check(CLI::PositiveNumber);
  cover->add_option("--permanent-ceiling", permanent_ceiling,
                    "largest matrix side for the exact permanent");
  cover->add_flag("--homology", cover_homology, "also compute the experimental cover homology");
  cover->add_option("--max-generators", max_generators, "cover complex generator ceiling");
  add_common(cover, flags);

  // dilatation
  auto* dilatation = app.add_subcommand("dilatation", "certified spectral radius and trace limits");
  std::string matrix_path;
  double tol = 1e-9;
  double trace_tol = 1e-6;
  int n_max = 40;
  dilatation->add_option("matrix", matrix_path, "matrix file")->required();
  dilatation->add_option("--tol", tol, "certified interval width")->check(CLI::PositiveNumber);
  dilatation->add_option("--trace-tol", trace_tol, "trace-limit convergence threshold")
      ->check(CLI::PositiveNumber);
  dilatation->add_option("--n-max", n_max, "trace sequence length")->check(CLI::PositiveNumber);
  add_common(dilatation, flags);

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "inequality calculators (key=value parameters)");
  std::string bound_name;
  std::vector<std::string> bound_params;
  double measured_value = 0;
  bounds_cmd->add_option("name", bound_name,
                         "dilatation-arc | eq1-rhs | volume-arc | entropy-relation | "
                         "cornish-growth | kojima-mcshane | volume-ratio | kojima-entropy-check | "
                         "volume-chain-audit")
      ->required();
  bounds_cmd->add_option("params", bound_params, "key=value parameters");
  auto* measured_opt = bounds_cmd->add_option("--measured", measured_value,
                                              "measured value to compare against the bound");
  add_common(bounds_cmd, flags);

  // screen
  auto* screen_cmd = app.add_subcommand("screen", "screen a database against a target knot");
  std::string db_path, target;
  double b_value = 0;
  bool experimental = false;
  int screen_ceiling = rib::hfk::kDefaultCeiling;
  screen_cmd->add_option("database", db_path, "knot database file")->required();
  screen_cmd->add_option("--target", target, "target knot name")->required();
  auto* b_opt = screen_cmd->add_option("--b", b_value, "constant b for the volume-ratio rule R8");
  screen_cmd->add_flag("--experimental-cover-rule", experimental,
                       "enable the n = 2 branched-cover rank rule R9");
  screen_cmd->add_option("--ceiling", screen_ceiling, "largest grid size enriched");
  add_common(screen_cmd, flags);

  // selftest
  auto* selftest = app.add_subcommand("selftest", "run the invariant suite at desk scale");
  int st_ceiling = rib::hfk::kDefaultCeiling;
  int st_grids = 50;
  bool inject_bug = false;
  std::string st_db = "data/demo_knots.db";
  selftest->add_option("--ceiling", st_ceiling, "largest grid size exercised");
  selftest->add_option("--rng-grids", st_grids, "random grids per size");
  selftest->add_option("--db", st_db, "demo database path");
  selftest->add_flag("--inject-grading-bug", inject_bug,
                     "negative control: corrupt one grading and expect failure");
  add_common(selftest, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (homology->parsed())
      return run_homology(homology_path, homology_ceiling, homology_check, flags);
    if (cover->parsed())
      return run_cover(cover_path, sheets, permanent_ceiling, cover_homology, max_generators,
                       flags);
    if (dilatation->parsed()) return run_dilatation(matrix_path, tol, trace_tol, n_max, flags);
    if (bounds_cmd->parsed()) {
      std::optional<double> measured;
      if (measured_opt->count() > 0) measured = measured_value;
      return run_bounds(bound_name, bound_params, measured, flags);
    }
    if (screen_cmd->parsed()) {
      std::optional<double> b;
      if (b_opt->count() > 0) b = b_value;
      return run_screen(db_path, target, b, experimental, screen_ceiling, flags);
    }
    if (selftest->parsed()) return run_selftest(st_ceiling, st_grids, inject_bug, st_db, flags);
  } catch (const rib::hfk::SizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCeilingError;
  } catch (const rib::hfk::ConsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConsistencyError;
  } catch (const rib::dyn::NotPrimitiveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNotPrimitive;
  } catch (const rib::dyn::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConsistencyError;
  } catch (const rib::cover::CoverError& e) {
    std::string what = e.what();
    std::cerr << "error: " << what << "\n";
    return what.find("ceiling") != std::string::npos ? kCeilingError : kConsistencyError;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const rib::cert::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    // grid/matrix/database parse and validation failures
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  }
  return kUsageError;
}
