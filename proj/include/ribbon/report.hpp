#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "ribbon/bounds.hpp"
#include "ribbon/cover.hpp"
#include "ribbon/dynamics.hpp"
#include "ribbon/grid.hpp"
#include "ribbon/hfk.hpp"
#include "ribbon/screen.hpp"

namespace rib::report {

using Json = nlohmann::ordered_json;

constexpr const char* kSchema = "ribbonscreen/1";

/// Stable text rendering of a double: 17 significant digits.
std::string fmt_double(double x);

struct HomologyResult {
  grid::GridDiagram diagram;
  hfk::BigradedDims tilde;
  hfk::BigradedDims hat;
  hfk::FiberednessReport fiberedness;
  hfk::AlexanderPolynomial alexander;
};

std::string homology_text(const HomologyResult& r);
Json homology_json(const HomologyResult& r);

struct CoverResult {
  int delta = 0;
  int sheets = 0;
  cover::MatchingCount count;
  mpq_class dim_bound;
  bool bound_satisfied = true;
  std::optional<hfk::BigradedDims> homology;  // relative gradings
};

std::string cover_text(const CoverResult& r);
Json cover_json(const CoverResult& r);

struct DilatationResult {
  int size = 0;
  dyn::DilatationEstimate estimate;
};

std::string dilatation_text(const DilatationResult& r);
Json dilatation_json(const DilatationResult& r);

std::string bound_text(const bounds::BoundReport& r);
Json bound_json(const bounds::BoundReport& r);

std::string chain_audit_text(const std::vector<bounds::ChainLine>& lines);
Json chain_audit_json(const std::vector<bounds::ChainLine>& lines);

struct ScreenResult {
  std::string target;
  std::vector<screen::ScreenVerdict> verdicts;
};

std::string screen_text(const ScreenResult& r);
Json screen_json(const ScreenResult& r);

/// Serializes with a trailing newline; byte-stable for identical inputs.
std::string dump(const Json& j);

}  // namespace rib::report
