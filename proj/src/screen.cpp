#include "ribbon/screen.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ribbon/bounds.hpp"
#include "ribbon/cover.hpp"

namespace rib::screen {

const char* to_string(RuleStatus s) {
  switch (s) {
    case RuleStatus::Pass: return "PASS";
    case RuleStatus::Fail: return "FAIL";
    case RuleStatus::Inapplicable: return "INAPPLICABLE";
  }
  return "?";
}

const char* to_string(Overall o) {
  switch (o) {
    case Overall::Excluded: return "EXCLUDED";
    case Overall::Possible: return "POSSIBLE";
    case Overall::MustEqual: return "MUST_EQUAL";
  }
  return "?";
}

void validate_record(KnotRecord& r) {
  if (r.name.empty()) throw RecordError("record without a name");
  auto fail = [&](const std::string& what) { throw RecordError("knot '" + r.name + "': " + what); };
  if (r.genus && *r.genus < 0) fail("negative genus");
  if (r.arc_index && *r.arc_index < 2) fail("arc index below 2");
  if (r.dilatation && *r.dilatation <= 1.0) fail("dilatation must exceed 1");
  if (r.volume && *r.volume <= 0) fail("volume must be positive");
  if (r.dilatation) {
    if (r.hyperbolic && !*r.hyperbolic) fail("dilatation declared on a non-hyperbolic knot");
    if (r.fibered && !*r.fibered) fail("dilatation declared on a non-fibered knot");
    r.hyperbolic = true;
    r.fibered = true;
  }
  if (r.grid && r.arc_index && *r.arc_index > r.grid->size())
    fail("declared arc index exceeds the size of the attached grid");
}

namespace {

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

std::string cmp_detail(double value, const cert::Interval& bound, cert::Cmp cmp) {
  std::string text = fmt(value) + " vs " + fmt(bound.hi);
  if (cmp == cert::Cmp::PassBoundary) text += " (within rounding slack of the boundary)";
  return text;
}

// Hypothesis state for rules that only constrain hyperbolic fibered J.
enum class Hypothesis { HoldsKnown, FailsKnown, Unknown };

Hypothesis hyperbolic_fibered(const KnotRecord& r) {
  if (r.dilatation) return Hypothesis::HoldsKnown;
  if ((r.hyperbolic && !*r.hyperbolic) || (r.fibered && !*r.fibered)) return Hypothesis::FailsKnown;
  if (r.hyperbolic && *r.hyperbolic && r.fibered && *r.fibered) return Hypothesis::HoldsKnown;
  return Hypothesis::Unknown;
}

RuleResult rule_genus(const KnotRecord& j, const KnotRecord& k) {
  RuleResult r{"R1 genus", RuleStatus::Inapplicable, "", false};
  if (!j.genus || !k.genus) {
    r.detail = "needs genus on both records";
    return r;
  }
  r.status = *j.genus <= *k.genus ? RuleStatus::Pass : RuleStatus::Fail;
  r.detail = "g(J)=" + std::to_string(*j.genus) + " vs g(K)=" + std::to_string(*k.genus);
  return r;
}

RuleResult rule_rank(const KnotRecord& j, const KnotRecord& k) {
  RuleResult r{"R2 rank", RuleStatus::Inapplicable, "", false};
  if (!j.hfk_dims || !k.hfk_dims) {
    r.detail = "needs knot Floer dimensions on both records";
    return r;
  }
  const auto& dj = *j.hfk_dims;
  const auto& dk = *k.hfk_dims;
  if (dj.total() > dk.total()) {
    r.status = RuleStatus::Fail;
    r.detail = "total " + std::to_string(dj.total()) + " > " + std::to_string(dk.total());
    return r;
  }
  int lo = std::min(dj.min_alexander(), dk.min_alexander());
  int hi = std::max(dj.max_alexander(), dk.max_alexander());
  for (int a = lo; a <= hi; ++a) {
    long long left = dj.alexander_total(a), right = dk.alexander_total(a);
    if (left > right) {
      r.status = RuleStatus::Fail;
      r.detail = "alexander grading " + std::to_string(a) + ": " + std::to_string(left) + " > " +
                 std::to_string(right);
      return r;
    }
  }
  if (j.hfk_computed && k.hfk_computed) {
    // Bigraded refinement, tolerant to an overall Maslov shift between the
    // two tables: some shift must embed J's table into K's gradingwise.
    auto maslov_range = [](const hfk::BigradedDims& d) {
      int lo = d.entries.begin()->first.first, hi = lo;
      for (const auto& [key, dim] : d.entries) {
        lo = std::min(lo, key.first);
        hi = std::max(hi, key.first);
      }
      return std::make_pair(lo, hi);
    };
    auto [jlo, jhi] = maslov_range(dj);
    auto [klo, khi] = maslov_range(dk);
    bool embeds = false;
    for (int shift = klo - jhi; shift <= khi - jlo && !embeds; ++shift) {
      bool ok = true;
      for (const auto& [key, d] : dj.entries)
        if (d > dk.dim(key.first + shift, key.second)) {
          ok = false;
          break;
        }
      embeds = ok;
    }
    if (!embeds) {
      r.status = RuleStatus::Fail;
      r.detail = "no Maslov shift embeds the bigraded table of J into K";
      return r;
    }
    r.detail = "per-grading and shift-tolerant bigraded comparison";
  } else {
    r.detail = "per-grading comparison";
  }
  r.status = RuleStatus::Pass;
  return r;
}

RuleResult rule_dilatation_arc(const KnotRecord& j, const KnotRecord& k) {
  RuleResult r{"R3 dilatation/arc", RuleStatus::Inapplicable, "", false};
  switch (hyperbolic_fibered(j)) {
    case Hypothesis::FailsKnown: {
      r.status = RuleStatus::Pass;
      r.detail = "J not hyperbolic fibered: no constraint";
      if (k.arc_index)
        r.detail += " (bound " + bounds::dilatation_arc_bound(*k.arc_index).exact->get_str() + ")";
      return r;
    }
    case Hypothesis::Unknown:
      r.detail = "hyperbolic/fibered status of J unknown";
      return r;
    case Hypothesis::HoldsKnown:
      break;
  }
  if (!j.dilatation) {
    r.detail = "needs the dilatation of J";
    return r;
  }
  if (!k.arc_index) {
    r.detail = "needs the arc index of K";
    return r;
  }
  auto bound = bounds::dilatation_arc_bound(*k.arc_index);
  auto cmp = cert::compare_le(*j.dilatation, bound.bound);
  r.status = cmp == cert::Cmp::FailCertified ? RuleStatus::Fail : RuleStatus::Pass;
  r.detail = "lambda(J)=" + fmt(*j.dilatation) + " vs " + bound.exact->get_str();
  if (cmp == cert::Cmp::PassBoundary) r.detail += " (within rounding slack of the boundary)";
  return r;
}

RuleResult rule_dilatation_dilatation(const KnotRecord& j, const KnotRecord& k) {
  RuleResult r{"R4 dilatation/dilatation", RuleStatus::Inapplicable, "", false};
  auto hj = hyperbolic_fibered(j), hk = hyperbolic_fibered(k);
  if (hj == Hypothesis::FailsKnown || hk == Hypothesis::FailsKnown) {
    r.status = RuleStatus::Pass;
    r.detail = "not a pair of hyperbolic fibered knots: no constraint";
    return r;
  }
  if (hj == Hypothesis::Unknown || hk == Hypothesis::Unknown) {
    r.detail = "hyperbolic/fibered status unknown";
    return r;
  }
  if (!j.dilatation || !k.dilatation || !k.genus) {
    r.detail = "needs both dilatations and the genus of K";
    return r;
  }
  if (*k.genus < 1) {
    r.detail = "genus of K is zero";
    return r;
  }
  auto bound = bounds::entropy_relation_bound(*k.dilatation, *k.genus);
  auto cmp = cert::compare_le(*j.dilatation, bound.bound);
  r.status = cmp == cert::Cmp::FailCertified ? RuleStatus::Fail : RuleStatus::Pass;
  r.detail = "lambda(J)=" + fmt(*j.dilatation) + " vs lambda(K)^g(K)";
  r.detail += " " + cmp_detail(*j.dilatation, bound.bound, cmp);
  return r;
}

RuleResult rule_volume_arc(const KnotRecord& j, const KnotRecord& k) {
  RuleResult r{"R5 volume/arc", RuleStatus::Inapplicable, "", false};
  switch (hyperbolic_fibered(j)) {
    case Hypothesis::FailsKnown:
      r.status = RuleStatus::Pass;
      r.detail = "J not hyperbolic fibered: no constraint";
      return r;
    case Hypothesis::Unknown:
      r.detail = "hyperbolic/fibered status of J unknown";
      return r;
    case Hypothesis::HoldsKnown:
      break;
  }
  if (!j.volume) {
    r.detail = "needs the volume of J";
    return r;
  }
  if (!k.genus || *k.genus < 1 || !k.arc_index) {
    r.detail = "needs positive genus and arc index of K";
    return r;
  }
  auto bound = bounds::volume_arc_bound(*k.genus, *k.arc_index);
  auto cmp = cert::compare_le(*j.volume, bound.bound);
  r.status = cmp == cert::Cmp::FailCertified ? RuleStatus::Fail : RuleStatus::Pass;
  r.detail = "vol(J) " + cmp_detail(*j.volume, bound.bound, cmp);
  return r;
}

RuleResult rule_fibered_propagation(const KnotRecord& j, const KnotRecord& k) {
  RuleResult r{"R6 fibered propagation", RuleStatus::Inapplicable, "", false};
  if (!k.fibered || !*k.fibered) {
    r.detail = "K not known fibered: no constraint";
    return r;
  }
  if (!j.fibered) {
    r.detail = "fiberedness of J unknown";
    return r;
  }
  r.status = *j.fibered ? RuleStatus::Pass : RuleStatus::Fail;
  r.detail = *j.fibered ? "both fibered" : "K fibered but J is not";
  return r;
}

RuleResult rule_fibered_equality(const KnotRecord& j, const KnotRecord& k) {
  RuleResult r{"R7 fibered equality", RuleStatus::Inapplicable, "", false};
  if (!j.fibered || !k.fibered || !*j.fibered || !*k.fibered) {
    r.detail = "needs both knots fibered";
    return r;
  }
  if (!j.alexander || !k.alexander) {
    r.detail = "needs both Alexander polynomials";
    return r;
  }
  int dj = j.alexander->degree(), dk = k.alexander->degree();
  if (dj == dk) {
    r.status = RuleStatus::Pass;
    r.fires_equality = true;
    r.detail = "equal Alexander degree " + std::to_string(dj) + ": a concordance forces J = K";
  } else {
    r.detail = "Alexander degrees differ (" + std::to_string(dj) + " vs " + std::to_string(dk) +
               "): no equality forced";
  }
  return r;
}

RuleResult rule_volume_ratio(const KnotRecord& j, const KnotRecord& k,
                             const std::optional<double>& b) {
  RuleResult r{"R8 volume ratio", RuleStatus::Inapplicable, "", false};
  if (!b) {
    r.detail = "needs a user-supplied constant b";
    return r;
  }
  auto hj = hyperbolic_fibered(j), hk = hyperbolic_fibered(k);
  if (hj == Hypothesis::FailsKnown || hk == Hypothesis::FailsKnown) {
    r.status = RuleStatus::Pass;
    r.detail = "not a pair of hyperbolic fibered knots: no constraint";
    return r;
  }
  if (hj == Hypothesis::Unknown || hk == Hypothesis::Unknown) {
    r.detail = "hyperbolic/fibered status unknown";
    return r;
  }
  if (!j.volume || !k.volume || !k.genus || *k.genus < 1) {
    r.detail = "needs both volumes and positive genus of K";
    return r;
  }
  auto constant = bounds::volume_ratio_constant(*k.genus, *b);
  auto bound = cert::mul(constant, cert::exact(*k.volume));
  auto cmp = cert::compare_le(*j.volume, bound);
  r.status = cmp == cert::Cmp::FailCertified ? RuleStatus::Fail : RuleStatus::Pass;
  r.detail = "vol(J) " + cmp_detail(*j.volume, bound, cmp);
  return r;
}

RuleResult rule_cover_rank(const KnotRecord& j, const KnotRecord& k, const ScreenOptions& opts) {
  RuleResult r{"R9 cover rank (experimental)", RuleStatus::Inapplicable, "", false};
  if (!j.grid || !k.grid) {
    r.detail = "needs grids on both records";
    return r;
  }
  auto reduced_total = [&](const grid::GridDiagram& g) -> std::optional<long long> {
    auto d = cover::build_cover(g, 2);
    auto count = cover::count_generators(d, {24, opts.workers});
    if (count.exact.has_value() &&
        *count.exact > static_cast<long>(opts.cover_generator_ceiling))
      return std::nullopt;
    cover::CoverHomologyOptions hopts;
    hopts.max_generators = opts.cover_generator_ceiling;
    hopts.workers = opts.workers;
    auto h = cover::cover_homology_experimental(d, hopts);
    return h.total() >> (g.size() - 1);
  };
  try {
    auto left = reduced_total(*j.grid);
    auto right = reduced_total(*k.grid);
    if (!left || !right) {
      r.detail = "cover complex exceeds the generator ceiling";
      return r;
    }
    r.status = *left <= *right ? RuleStatus::Pass : RuleStatus::Fail;
    r.detail = "n=2 cover dims " + std::to_string(*left) + " vs " + std::to_string(*right);
  } catch (const cover::CoverError& e) {
    r.detail = std::string("cover computation unavailable: ") + e.what();
  }
  return r;
}

}  // namespace

ScreenVerdict screen_pair(const KnotRecord& j, const KnotRecord& k, const ScreenOptions& opts) {
  KnotRecord jv = j, kv = k;
  validate_record(jv);
  validate_record(kv);

  ScreenVerdict verdict;
  verdict.candidate = jv.name;
  verdict.target = kv.name;
  verdict.rules.push_back(rule_genus(jv, kv));
  verdict.rules.push_back(rule_rank(jv, kv));
  verdict.rules.push_back(rule_dilatation_arc(jv, kv));
  verdict.rules.push_back(rule_dilatation_dilatation(jv, kv));
  verdict.rules.push_back(rule_volume_arc(jv, kv));
  verdict.rules.push_back(rule_fibered_propagation(jv, kv));
  verdict.rules.push_back(rule_fibered_equality(jv, kv));
  verdict.rules.push_back(rule_volume_ratio(jv, kv, opts.b));
  if (opts.experimental_cover_rule) verdict.rules.push_back(rule_cover_rank(jv, kv, opts));

  bool failed = false, equality = false;
  for (const auto& rule : verdict.rules) {
    if (rule.status == RuleStatus::Fail) failed = true;
    if (rule.fires_equality && rule.status == RuleStatus::Pass) equality = true;
  }
  verdict.overall = failed ? Overall::Excluded : (equality ? Overall::MustEqual : Overall::Possible);
  return verdict;
}

std::vector<ScreenVerdict> screen_database(const KnotRecord& k, const std::vector<KnotRecord>& db,
                                           const ScreenOptions& opts) {
  std::set<std::string> names;
  for (const auto& record : db)
    if (!names.insert(record.name).second)
      throw RecordError("duplicate knot name '" + record.name + "' in the database");
  std::vector<ScreenVerdict> verdicts;
  verdicts.reserve(db.size());
  for (const auto& candidate : db) verdicts.push_back(screen_pair(candidate, k, opts));
  return verdicts;
}

KnotRecord enrich_record(const KnotRecord& r, const ScreenOptions& opts) {
  KnotRecord out = r;
  validate_record(out);
  if (!out.grid) return out;

  hfk::HomologyOptions hopts;
  hopts.ceiling = opts.homology_ceiling;
  hopts.workers = opts.workers;
  if (!out.grid->is_knot())
    throw RecordError("knot '" + out.name + "': attached grid presents a link");
  auto hat = hfk::hfk_hat(*out.grid, hopts);
  auto fib = hfk::genus_and_fiberedness(hat);
  auto poly = hfk::alexander_polynomial(hat);

  auto mismatch = [&](const std::string& field) {
    throw RecordError("knot '" + out.name + "': declared " + field +
                      " contradicts the grid recomputation");
  };
  if (out.genus && *out.genus != fib.genus) mismatch("genus");
  if (out.fibered && *out.fibered != fib.fibered) mismatch("fiberedness");
  if (out.hfk_dims && !(*out.hfk_dims == hat)) mismatch("knot Floer dimensions");
  if (out.alexander && !(*out.alexander == poly)) mismatch("Alexander polynomial");

  out.genus = fib.genus;
  out.fibered = fib.fibered;
  out.hfk_dims = hat;
  out.hfk_computed = true;
  out.alexander = poly;
  if (!out.arc_index) out.arc_index = out.grid->size();
  validate_record(out);
  return out;
}

namespace {

bool parse_bool(const std::string& value, const std::string& context) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw RecordError(context + ": expected true or false, got '" + value + "'");
}

}  // namespace

std::vector<KnotRecord> parse_database(const std::string& text) {
  std::vector<KnotRecord> records;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool inside = false;
  KnotRecord current;

  auto context = [&]() { return "database line " + std::to_string(lineno); };

  while (std::getline(in, line)) {
    ++lineno;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    size_t last = line.find_last_not_of(" \t\r");
    std::string trimmed = line.substr(first, last - first + 1);

    if (trimmed == "begin knot") {
      if (inside) throw RecordError(context() + ": nested 'begin knot'");
      inside = true;
      current = KnotRecord{};
      continue;
    }
    if (trimmed == "end knot") {
      if (!inside) throw RecordError(context() + ": 'end knot' outside a record");
      validate_record(current);
      records.push_back(std::move(current));
      current = KnotRecord{};
      inside = false;
      continue;
    }
    if (!inside) throw RecordError(context() + ": content outside 'begin knot' ... 'end knot'");

    if (trimmed == "grid:") {
      // exactly three content lines in the grid file format
      std::vector<std::string> grid_lines;
      while (grid_lines.size() < 3 && std::getline(in, line)) {
        ++lineno;
        size_t f = line.find_first_not_of(" \t\r");
        if (f == std::string::npos || line[f] == '#') continue;
        grid_lines.push_back(line);
      }
      if (grid_lines.size() < 3) throw RecordError(context() + ": truncated inline grid");
      try {
        current.grid = grid::parse_grid(grid_lines[0] + "\n" + grid_lines[1] + "\n" + grid_lines[2]);
      } catch (const grid::GridError& e) {
        throw RecordError(context() + ": " + e.what());
      }
      continue;
    }

    size_t colon = trimmed.find(':');
    if (colon == std::string::npos)
      throw RecordError(context() + ": expected 'key: value', got '" + trimmed + "'");
    std::string key = trimmed.substr(0, colon);
    std::string value = trimmed.substr(colon + 1);
    size_t vs = value.find_first_not_of(" \t");
    value = vs == std::string::npos ? "" : value.substr(vs);
    if (value.empty()) throw RecordError(context() + ": empty value for '" + key + "'");

    try {
      if (key == "name") {
        current.name = value;
      } else if (key == "genus") {
        current.genus = std::stoi(value);
      } else if (key == "arc-index") {
        current.arc_index = std::stoi(value);
      } else if (key == "fibered") {
        current.fibered = parse_bool(value, context());
      } else if (key == "hyperbolic") {
        current.hyperbolic = parse_bool(value, context());
      } else if (key == "dilatation") {
        current.dilatation = std::stod(value);
      } else if (key == "volume") {
        current.volume = std::stod(value);
      } else if (key == "alexander") {
        // pairs "exponent coefficient" separated by commas
        hfk::AlexanderPolynomial poly;
        std::istringstream vs2(value);
        std::string pair;
        while (std::getline(vs2, pair, ',')) {
          std::istringstream ps(pair);
          int exponent;
          long long coefficient;
          if (!(ps >> exponent >> coefficient))
            throw RecordError(context() + ": bad alexander pair '" + pair + "'");
          poly.coeffs[exponent] = coefficient;
        }
        current.alexander = poly;
      } else if (key == "hfk") {
        // triples "maslov alexander dim" separated by commas
        hfk::BigradedDims dims;
        std::istringstream vs2(value);
        std::string triple;
        while (std::getline(vs2, triple, ',')) {
          std::istringstream ts(triple);
          int maslov, alexander;
          long long dim;
          if (!(ts >> maslov >> alexander >> dim))
            throw RecordError(context() + ": bad hfk triple '" + triple + "'");
          dims.entries[{maslov, alexander}] = dim;
        }
        current.hfk_dims = dims;
      } else {
        throw RecordError(context() + ": unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw RecordError(context() + ": bad value '" + value + "' for '" + key + "'");
    } catch (const std::out_of_range&) {
      throw RecordError(context() + ": value out of range for '" + key + "'");
    }
  }
  if (inside) throw RecordError("unterminated record: missing 'end knot'");
  return records;
}

std::vector<KnotRecord> load_database_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RecordError("cannot open database file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_database(buf.str());
}

}  // namespace rib::screen
