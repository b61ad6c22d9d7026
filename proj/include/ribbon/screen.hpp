#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ribbon/grid.hpp"
#include "ribbon/hfk.hpp"

namespace rib::screen {

class RecordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Named bundle of knot invariants. Fields are optional; a missing field
/// makes the rules that need it inapplicable, never failed. hfk_computed
/// marks tables produced by this tool's own engine (bigraded comparisons are
/// only safe between those).
struct KnotRecord {
  std::string name;
  std::optional<int> genus;
  std::optional<int> arc_index;
  std::optional<bool> fibered;
  std::optional<bool> hyperbolic;
  std::optional<double> dilatation;  // > 1; implies hyperbolic and fibered
  std::optional<double> volume;      // > 0
  std::optional<hfk::BigradedDims> hfk_dims;
  bool hfk_computed = false;
  std::optional<hfk::AlexanderPolynomial> alexander;
  std::optional<grid::GridDiagram> grid;
};

/// Field-level invariants (ranges, dilatation implications). Throws
/// RecordError on violation; fills hyperbolic/fibered implied by dilatation.
void validate_record(KnotRecord& r);

enum class RuleStatus { Pass, Fail, Inapplicable };

struct RuleResult {
  std::string id;
  RuleStatus status = RuleStatus::Inapplicable;
  std::string detail;
  bool fires_equality = false;  // set by R7 when its hypotheses hold
};

enum class Overall { Excluded, Possible, MustEqual };

struct ScreenVerdict {
  std::string candidate;
  std::string target;
  std::vector<RuleResult> rules;
  Overall overall = Overall::Possible;
};

struct ScreenOptions {
  std::optional<double> b;          // enables R8
  bool experimental_cover_rule = false;  // enables R9 at n = 2
  long long cover_generator_ceiling = 200000;
  int homology_ceiling = hfk::kDefaultCeiling;
  int workers = 1;
};

/// Evaluates rules R1..R8 (R9 opt-in) as necessary conditions for J <= K.
ScreenVerdict screen_pair(const KnotRecord& j, const KnotRecord& k, const ScreenOptions& opts = {});

std::vector<ScreenVerdict> screen_database(const KnotRecord& k, const std::vector<KnotRecord>& db,
                                           const ScreenOptions& opts = {});

/// Fills genus/fibered/hfk/alexander (and arc_index as the grid size) from
/// the grid; declared values that contradict the recomputation are an error.
KnotRecord enrich_record(const KnotRecord& r, const ScreenOptions& opts = {});

/// Knot database: records between "begin knot" / "end knot" lines, "key: value"
/// fields, grids inline in the grid file format introduced by a "grid:" line.
std::vector<KnotRecord> parse_database(const std::string& text);
std::vector<KnotRecord> load_database_file(const std::string& path);

const char* to_string(RuleStatus s);
const char* to_string(Overall o);

}  // namespace rib::screen
