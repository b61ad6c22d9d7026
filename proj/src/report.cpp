#include "ribbon/report.hpp"

#include <sstream>

namespace rib::report {

std::string fmt_double(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

namespace {

void dims_lines(std::ostringstream& out, const hfk::BigradedDims& dims) {
  for (const auto& [key, d] : dims.entries)
    out << key.first << ' ' << key.second << ' ' << d << "\n";
}

Json dims_json(const hfk::BigradedDims& dims) {
  Json rows = Json::array();
  for (const auto& [key, d] : dims.entries)
    rows.push_back({{"maslov", key.first}, {"alexander", key.second}, {"dim", d}});
  return rows;
}

Json poly_json(const hfk::AlexanderPolynomial& poly) {
  int lo = poly.coeffs.empty() ? 0 : poly.coeffs.begin()->first;
  int hi = poly.coeffs.empty() ? 0 : poly.coeffs.rbegin()->first;
  Json coeffs = Json::array();
  for (int e = lo; e <= hi; ++e) coeffs.push_back(poly.coeff(e));
  return {{"min_exp", lo}, {"coeffs", coeffs}};
}

}  // namespace

std::string homology_text(const HomologyResult& r) {
  std::ostringstream out;
  out << "grid-size " << r.diagram.size() << "\n";
  out << "# hfk-hat (maslov alexander dim)\n";
  dims_lines(out, r.hat);
  out << "# hfk-tilde (maslov alexander dim)\n";
  dims_lines(out, r.tilde);
  out << "total-hat " << r.hat.total() << "\n";
  out << "total-tilde " << r.tilde.total() << "\n";
  out << "genus " << r.fiberedness.genus << "\n";
  out << "fibered " << (r.fiberedness.fibered ? "true" : "false") << "\n";
  out << "nearly-fibered " << (r.fiberedness.nearly_fibered ? "true" : "false") << "\n";
  int lo = r.alexander.coeffs.empty() ? 0 : r.alexander.coeffs.begin()->first;
  int hi = r.alexander.coeffs.empty() ? 0 : r.alexander.coeffs.rbegin()->first;
  out << "alexander-min-exp " << lo << "\n";
  out << "alexander-coeffs";
  for (int e = lo; e <= hi; ++e) out << ' ' << r.alexander.coeff(e);
  out << "\n";
  return out.str();
}

Json homology_json(const HomologyResult& r) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = "homology";
  j["grid_size"] = r.diagram.size();
  j["hat"] = dims_json(r.hat);
  j["tilde"] = dims_json(r.tilde);
  j["total_hat"] = r.hat.total();
  j["total_tilde"] = r.tilde.total();
  j["genus"] = r.fiberedness.genus;
  j["fibered"] = r.fiberedness.fibered;
  j["nearly_fibered"] = r.fiberedness.nearly_fibered;
  j["alexander"] = poly_json(r.alexander);
  return j;
}

std::string cover_text(const CoverResult& r) {
  std::ostringstream out;
  out << "delta " << r.delta << "\n";
  out << "sheets " << r.sheets << "\n";
  if (r.count.exact.has_value())
    out << "generators " << r.count.exact->get_str() << "\n";
  else
    out << "generators bound-only (permanent ceiling exceeded)\n";
  out << "matching-bound " << r.count.bregman_bound.get_str() << "\n";
  out << "dimension-bound " << r.dim_bound.get_str() << "\n";
  out << "bound-satisfied " << (r.bound_satisfied ? "true" : "false") << "\n";
  if (r.homology.has_value()) {
    out << "# cover homology (relative maslov, unresolved alexander, dim)\n";
    dims_lines(out, *r.homology);
    out << "cover-total " << r.homology->total() << "\n";
  }
  return out.str();
}

Json cover_json(const CoverResult& r) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = "cover";
  j["delta"] = r.delta;
  j["sheets"] = r.sheets;
  if (r.count.exact.has_value())
    j["generators"] = r.count.exact->get_str();
  else
    j["generators"] = nullptr;
  j["exact"] = r.count.exact.has_value();
  j["matching_bound"] = r.count.bregman_bound.get_str();
  j["dimension_bound"] = r.dim_bound.get_str();
  j["bound_satisfied"] = r.bound_satisfied;
  if (r.homology.has_value()) {
    j["cover_homology"] = dims_json(*r.homology);
    j["cover_total"] = r.homology->total();
  }
  return j;
}

std::string dilatation_text(const DilatationResult& r) {
  std::ostringstream out;
  const auto& e = r.estimate;
  out << "size " << r.size << "\n";
  out << "spectral-radius " << fmt_double(e.spectral_radius) << "\n";
  out << "interval " << fmt_double(e.lower) << ' ' << fmt_double(e.upper) << "\n";
  out << "interval-width " << fmt_double(e.upper - e.lower) << "\n";
  out << "iterations " << e.iterations << "\n";
  if (!e.trace_sequence.empty()) {
    out << "# trace limit (n, tr(M^n), tr^(1/n), power-of-two)\n";
    for (const auto& pt : e.trace_sequence)
      out << pt.n << ' ' << pt.trace.get_str() << ' ' << fmt_double(pt.value) << ' '
          << (pt.power_of_two ? "pow2" : "-") << "\n";
    out << "final-gap " << fmt_double(e.final_trace_gap) << "\n";
    out << "converged " << (e.trace_converged ? "true" : "false") << "\n";
    out << "tail-monotone " << (e.trace_tail_monotone ? "true" : "false") << "\n";
    out << "pow2-monotone " << (e.pow2_tail_monotone ? "true" : "false") << "\n";
  }
  return out.str();
}

Json dilatation_json(const DilatationResult& r) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = "dilatation";
  j["size"] = r.size;
  const auto& e = r.estimate;
  j["spectral_radius"] = e.spectral_radius;
  j["lower"] = e.lower;
  j["upper"] = e.upper;
  j["iterations"] = e.iterations;
  Json seq = Json::array();
  for (const auto& pt : e.trace_sequence)
    seq.push_back({{"n", pt.n},
                   {"trace", pt.trace.get_str()},
                   {"value", pt.value},
                   {"power_of_two", pt.power_of_two}});
  j["trace_sequence"] = seq;
  if (!e.trace_sequence.empty()) {
    j["final_gap"] = e.final_trace_gap;
    j["converged"] = e.trace_converged;
    j["tail_monotone"] = e.trace_tail_monotone;
    j["pow2_monotone"] = e.pow2_tail_monotone;
  }
  return j;
}

std::string bound_text(const bounds::BoundReport& r) {
  std::ostringstream out;
  out << "bound " << r.name << "\n";
  for (const auto& [key, value] : r.inputs) out << key << ' ' << value << "\n";
  if (r.exact.has_value())
    out << "value " << r.exact->get_str() << "\n";
  else
    out << "value " << fmt_double(r.bound.hi) << "\n";
  out << "interval " << fmt_double(r.bound.lo) << ' ' << fmt_double(r.bound.hi) << "\n";
  if (r.measured.has_value()) {
    out << "measured " << fmt_double(*r.measured) << "\n";
    out << "satisfied " << (*r.satisfied ? "true" : "false") << "\n";
    if (r.boundary_warning) out << "warning comparison within rounding slack of the boundary\n";
  }
  return out.str();
}

Json bound_json(const bounds::BoundReport& r) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = "bounds";
  j["bound"] = r.name;
  Json inputs;
  for (const auto& [key, value] : r.inputs) inputs[key] = value;
  j["inputs"] = inputs;
  if (r.exact.has_value()) j["exact"] = r.exact->get_str();
  j["value"] = r.bound.hi;
  j["lower"] = r.bound.lo;
  j["upper"] = r.bound.hi;
  if (r.measured.has_value()) {
    j["measured"] = *r.measured;
    j["satisfied"] = *r.satisfied;
    j["boundary_warning"] = r.boundary_warning;
  }
  return j;
}

std::string chain_audit_text(const std::vector<bounds::ChainLine>& lines) {
  std::ostringstream out;
  out << "volume chain audit\n";
  for (const auto& line : lines) {
    out << (line.violated ? "VIOLATED " : (line.certified ? "ok       " : "holds    "));
    out << line.label << "  [" << fmt_double(line.lhs.hi) << " vs " << fmt_double(line.rhs.lo)
        << "]\n";
  }
  return out.str();
}

Json chain_audit_json(const std::vector<bounds::ChainLine>& lines) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = "bounds";
  j["bound"] = "volume-chain-audit";
  Json rows = Json::array();
  for (const auto& line : lines)
    rows.push_back({{"label", line.label},
                    {"lhs_hi", line.lhs.hi},
                    {"rhs_lo", line.rhs.lo},
                    {"certified", line.certified},
                    {"violated", line.violated}});
  j["lines"] = rows;
  return j;
}

std::string screen_text(const ScreenResult& r) {
  std::ostringstream out;
  out << "target " << r.target << "\n";
  long long excluded = 0, possible = 0, must_equal = 0;
  for (const auto& v : r.verdicts) {
    out << "candidate " << v.candidate << ": " << screen::to_string(v.overall) << "\n";
    for (const auto& rule : v.rules)
      out << "  " << rule.id << ": " << screen::to_string(rule.status) << " (" << rule.detail
          << ")\n";
    switch (v.overall) {
      case screen::Overall::Excluded: ++excluded; break;
      case screen::Overall::Possible: ++possible; break;
      case screen::Overall::MustEqual: ++must_equal; break;
    }
  }
  out << "summary excluded " << excluded << " possible " << possible << " must-equal "
      << must_equal << "\n";
  return out.str();
}

Json screen_json(const ScreenResult& r) {
  Json j;
  j["schema"] = kSchema;
  j["command"] = "screen";
  j["target"] = r.target;
  Json verdicts = Json::array();
  long long excluded = 0, possible = 0, must_equal = 0;
  for (const auto& v : r.verdicts) {
    Json rules = Json::array();
    for (const auto& rule : v.rules)
      rules.push_back(
          {{"id", rule.id}, {"status", screen::to_string(rule.status)}, {"detail", rule.detail}});
    verdicts.push_back(
        {{"candidate", v.candidate}, {"overall", screen::to_string(v.overall)}, {"rules", rules}});
    switch (v.overall) {
      case screen::Overall::Excluded: ++excluded; break;
      case screen::Overall::Possible: ++possible; break;
      case screen::Overall::MustEqual: ++must_equal; break;
    }
  }
  j["verdicts"] = verdicts;
  j["summary"] = {{"excluded", excluded}, {"possible", possible}, {"must_equal", must_equal}};
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace rib::report
