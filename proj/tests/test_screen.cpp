#include "ribbon/screen.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ribbon/bounds.hpp"

using namespace rib::screen;

namespace {

KnotRecord with_grid(const std::string& name, const std::string& grid_text) {
  KnotRecord r;
  r.name = name;
  r.grid = rib::grid::parse_grid(grid_text);
  return r;
}

KnotRecord unknot_record() { return with_grid("unknot", "2\nX: 1 0\nO: 0 1"); }
KnotRecord trefoil_record() { return with_grid("trefoil", "5\nX: 2 3 4 0 1\nO: 0 1 2 3 4"); }
KnotRecord figure_eight_record() {
  auto r = with_grid("figure-eight", "6\nX: 2 0 5 3 4 1\nO: 5 4 1 0 2 3");
  r.hyperbolic = true;
  r.dilatation = 2.618033988749895;
  r.volume = 2.029883212819307;
  return r;
}

const RuleResult& rule(const ScreenVerdict& v, const std::string& id) {
  for (const auto& r : v.rules)
    if (r.id.substr(0, id.size()) == id) return r;
  throw std::runtime_error("no rule " + id);
}

}  // namespace

TEST_CASE("record validation") {
  KnotRecord r;
  r.name = "x";
  r.dilatation = 2.0;
  validate_record(r);
  CHECK(r.hyperbolic == true);
  CHECK(r.fibered == true);

  KnotRecord bad = r;
  bad.fibered = false;
  CHECK_THROWS_AS(validate_record(bad), RecordError);
  bad = r;
  bad.dilatation = 0.9;
  CHECK_THROWS_AS(validate_record(bad), RecordError);
  bad = KnotRecord{};
  CHECK_THROWS_AS(validate_record(bad), RecordError);  // unnamed
  bad = KnotRecord{};
  bad.name = "y";
  bad.volume = -1;
  CHECK_THROWS_AS(validate_record(bad), RecordError);
}

TEST_CASE("enrichment fills and cross-checks") {
  auto enriched = enrich_record(trefoil_record());
  CHECK(enriched.genus == 1);
  CHECK(enriched.fibered == true);
  CHECK(enriched.hfk_dims->total() == 3);
  CHECK(enriched.alexander->coeff(1) == 1);
  CHECK(enriched.alexander->coeff(0) == -1);
  CHECK(enriched.arc_index == 5);
  CHECK(enriched.hfk_computed);

  auto declared = trefoil_record();
  declared.genus = 1;
  CHECK(enrich_record(declared).genus == 1);

  auto contradiction = trefoil_record();
  contradiction.genus = 2;
  CHECK_THROWS_AS(enrich_record(contradiction), RecordError);

  auto too_small = trefoil_record();
  too_small.arc_index = 7;  // exceeds the attached 5x5 grid
  CHECK_THROWS_AS(enrich_record(too_small), RecordError);

  auto nonminimal = trefoil_record();
  nonminimal.arc_index = 4;  // smaller declared arc index is kept
  CHECK(enrich_record(nonminimal).arc_index == 4);
}

TEST_CASE("figure-eight against trefoil is excluded by rank") {
  auto j = enrich_record(figure_eight_record());
  auto k = enrich_record(trefoil_record());
  auto verdict = screen_pair(j, k);
  CHECK(verdict.overall == Overall::Excluded);
  CHECK(rule(verdict, "R2").status == RuleStatus::Fail);
  CHECK(rule(verdict, "R1").status == RuleStatus::Pass);
}

TEST_CASE("a knot screened against itself must-equal") {
  for (auto record : {unknot_record(), trefoil_record(), figure_eight_record()}) {
    auto enriched = enrich_record(record);
    auto verdict = screen_pair(enriched, enriched);
    CHECK(verdict.overall == Overall::MustEqual);
  }
}

TEST_CASE("figure-eight against a size-6 fibered target passes the numeric rules") {
  auto j = enrich_record(figure_eight_record());
  auto k = enrich_record(figure_eight_record());
  k.name = "target";
  auto verdict = screen_pair(j, k);
  CHECK(rule(verdict, "R1").status == RuleStatus::Pass);
  CHECK(rule(verdict, "R2").status == RuleStatus::Pass);
  CHECK(rule(verdict, "R3").status == RuleStatus::Pass);  // 2.618 <= 720
  CHECK(rule(verdict, "R5").status == RuleStatus::Pass);  // 2.0299 <= 62.01
  CHECK(verdict.overall == Overall::MustEqual);           // R7 fires
}

TEST_CASE("volume ratio rule needs b and can fail") {
  auto j = enrich_record(figure_eight_record());
  auto k = j;
  k.name = "target";
  auto without = screen_pair(j, k);
  CHECK(rule(without, "R8").status == RuleStatus::Inapplicable);

  ScreenOptions opts;
  opts.b = 1.0;
  auto with = screen_pair(j, k, opts);
  CHECK(rule(with, "R8").status == RuleStatus::Pass);  // vol <= 3pi*vol

  ScreenOptions tiny;
  tiny.b = 1e-9;
  auto failing = screen_pair(j, k, tiny);
  CHECK(rule(failing, "R8").status == RuleStatus::Fail);
  CHECK(failing.overall == Overall::Excluded);
}

TEST_CASE("dilatation bound can certify exclusion") {
  auto j = enrich_record(figure_eight_record());
  j.name = "fast";
  j.dilatation = 1e6;  // larger than 5! and than lambda^g of the target
  auto k = enrich_record(figure_eight_record());
  k.name = "target";
  // drop hfk data so only the dilatation rules can exclude
  j.hfk_dims.reset();
  j.hfk_computed = false;
  j.alexander.reset();
  auto verdict = screen_pair(j, k);
  CHECK(rule(verdict, "R4").status == RuleStatus::Fail);  // 1e6 > 2.618^1
  CHECK(verdict.overall == Overall::Excluded);

  auto vs_trefoil = screen_pair(j, enrich_record(trefoil_record()));
  CHECK(rule(vs_trefoil, "R3").status == RuleStatus::Fail);  // 1e6 > 120
}

TEST_CASE("screen database: order, summary, duplicates, empty") {
  std::vector<KnotRecord> db;
  CHECK(screen_database(enrich_record(trefoil_record()), db).empty());

  db = {enrich_record(unknot_record()), enrich_record(trefoil_record()),
        enrich_record(figure_eight_record())};
  auto verdicts = screen_database(db[1], db);
  REQUIRE(verdicts.size() == 3);
  CHECK(verdicts[0].candidate == "unknot");
  CHECK(verdicts[0].overall == Overall::Possible);
  CHECK(verdicts[1].overall == Overall::MustEqual);
  CHECK(verdicts[2].overall == Overall::Excluded);

  db.push_back(db[0]);
  CHECK_THROWS_AS(screen_database(db[1], db), RecordError);
}

TEST_CASE("record with no optional fields yields no failures") {
  KnotRecord bare;
  bare.name = "mystery";
  auto verdict = screen_pair(bare, enrich_record(trefoil_record()));
  CHECK(verdict.overall == Overall::Possible);
  for (const auto& r : verdict.rules) CHECK(r.status != RuleStatus::Fail);
}

TEST_CASE("monotonicity of information: dropping fields never flips pass/fail") {
  std::mt19937_64 rng(71);
  std::vector<KnotRecord> records = {enrich_record(unknot_record()),
                                     enrich_record(trefoil_record()),
                                     enrich_record(figure_eight_record())};
  ScreenOptions opts;
  opts.b = 0.5;
  auto drop_fields = [&](KnotRecord r, uint64_t mask) {
    if (mask & 1) r.genus.reset();
    if (mask & 2) r.arc_index.reset();
    if (mask & 4) r.fibered.reset();
    if (mask & 8) r.hyperbolic.reset();
    if (mask & 16) r.dilatation.reset();
    if (mask & 32) r.volume.reset();
    if (mask & 64) {
      r.hfk_dims.reset();
      r.hfk_computed = false;
    }
    if (mask & 128) r.alexander.reset();
    // dropping fibered/hyperbolic alone is refilled from dilatation by
    // validation, which is the intended semantics
    return r;
  };
  for (const auto& j_full : records) {
    for (const auto& k_full : records) {
      auto full = screen_pair(j_full, k_full, opts);
      for (int trial = 0; trial < 40; ++trial) {
        auto j = drop_fields(j_full, rng());
        auto k = drop_fields(k_full, rng());
        auto dropped = screen_pair(j, k, opts);
        REQUIRE(dropped.rules.size() == full.rules.size());
        for (size_t i = 0; i < full.rules.size(); ++i) {
          if (dropped.rules[i].status == RuleStatus::Inapplicable) continue;
          // With less information a rule may only become inapplicable or
          // keep its decision; PASS and FAIL never flip into each other.
          if (full.rules[i].status == RuleStatus::Pass)
            CHECK(dropped.rules[i].status == RuleStatus::Pass);
          if (full.rules[i].status == RuleStatus::Fail)
            CHECK(dropped.rules[i].status == RuleStatus::Fail);
        }
      }
    }
  }
}

TEST_CASE("kojima-mcshane applied after R3 stays below the volume-arc bound") {
  // R3 passing with lambda(J) <= delta(K)! forces the composed volume bound.
  double lambda = 2.618033988749895;
  auto km = rib::bounds::kojima_mcshane_bound(1, lambda);
  auto va = rib::bounds::volume_arc_bound(1, 5);
  CHECK(km.bound.hi <= va.bound.hi);
}

TEST_CASE("database text format") {
  std::string text = R"(# demo
begin knot
name: sample
genus: 1
fibered: true
alexander: -1 1, 0 -1, 1 1
hfk: 0 -1 1, 1 0 1, 2 1 1
grid:
5
X: 2 3 4 0 1
O: 0 1 2 3 4
end knot
)";
  auto records = parse_database(text);
  REQUIRE(records.size() == 1);
  CHECK(records[0].name == "sample");
  CHECK(records[0].genus == 1);
  CHECK(records[0].alexander->coeff(0) == -1);
  CHECK(records[0].hfk_dims->total() == 3);
  CHECK(records[0].grid->size() == 5);
  // declared values match the grid recomputation
  CHECK_NOTHROW(enrich_record(records[0]));

  CHECK_THROWS_AS(parse_database("begin knot\nname: a\n"), RecordError);          // unterminated
  CHECK_THROWS_AS(parse_database("name: a\n"), RecordError);                      // outside record
  CHECK_THROWS_AS(parse_database("begin knot\nbogus: 1\nend knot\n"), RecordError);
  CHECK_THROWS_AS(parse_database("begin knot\nname: a\ngenus: x\nend knot\n"), RecordError);
  CHECK_THROWS_AS(parse_database("begin knot\nname: a\ngrid:\n2\nX: 0 1\nO: 0 1\nend knot\n"),
                  RecordError);
}

TEST_CASE("experimental cover rule") {
  ScreenOptions opts;
  opts.experimental_cover_rule = true;
  auto u = enrich_record(unknot_record());
  auto verdict = screen_pair(u, u, opts);
  CHECK(rule(verdict, "R9").status == RuleStatus::Pass);

  auto j = enrich_record(unknot_record());
  auto k = enrich_record(trefoil_record());
  auto pair = screen_pair(j, k, opts);
  CHECK(rule(pair, "R9").status == RuleStatus::Pass);  // 1 <= 5

  // a tight generator ceiling leaves the rule inapplicable, never failed
  ScreenOptions capped = opts;
  capped.cover_generator_ceiling = 1000;
  auto limited = screen_pair(k, k, capped);  // trefoil double cover has 6032 generators
  CHECK(rule(limited, "R9").status == RuleStatus::Inapplicable);
}
