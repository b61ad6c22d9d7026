#include "ribbon/grid.hpp"

#include <fstream>
#include <sstream>

namespace rib::grid {

namespace {

void check_permutation(const std::vector<int>& v, const char* which) {
  const int n = static_cast<int>(v.size());
  std::vector<char> seen(static_cast<size_t>(n), 0);
  for (int c = 0; c < n; ++c) {
    int r = v[static_cast<size_t>(c)];
    if (r < 0 || r >= n) {
      throw GridError(std::string(which) + " row " + std::to_string(r) +
                      " in column " + std::to_string(c) + " is out of range 0.." +
                      std::to_string(n - 1));
    }
    if (seen[static_cast<size_t>(r)]) {
      throw GridError(std::string(which) + " rows are not a permutation: row " +
                      std::to_string(r) + " repeats at column " + std::to_string(c));
    }
    seen[static_cast<size_t>(r)] = 1;
  }
}

}  // namespace

GridDiagram::GridDiagram(std::vector<int> xs, std::vector<int> os)
    : xs_(std::move(xs)), os_(std::move(os)) {
  if (xs_.size() != os_.size()) {
    throw GridError("X and O rows have different lengths (" +
                    std::to_string(xs_.size()) + " vs " + std::to_string(os_.size()) + ")");
  }
  if (xs_.size() < 2) {
    throw GridError("grid size must be at least 2, got " + std::to_string(xs_.size()));
  }
  check_permutation(xs_, "X");
  check_permutation(os_, "O");
  for (size_t c = 0; c < xs_.size(); ++c) {
    if (xs_[c] == os_[c]) {
      throw GridError("X/O collision in column " + std::to_string(c) +
                      " (both in row " + std::to_string(xs_[c]) + ")");
    }
  }
}

int GridDiagram::component_count() const {
  const int n = size();
  // Column-to-column successor: vertical segment of column c ends at its O,
  // the horizontal segment of that row leads to the X of some column.
  std::vector<int> row_to_xcol(static_cast<size_t>(n));
  for (int c = 0; c < n; ++c) row_to_xcol[static_cast<size_t>(xs_[static_cast<size_t>(c)])] = c;
  std::vector<char> visited(static_cast<size_t>(n), 0);
  int components = 0;
  for (int start = 0; start < n; ++start) {
    if (visited[static_cast<size_t>(start)]) continue;
    ++components;
    int c = start;
    while (!visited[static_cast<size_t>(c)]) {
      visited[static_cast<size_t>(c)] = 1;
      c = row_to_xcol[static_cast<size_t>(os_[static_cast<size_t>(c)])];
    }
  }
  return components;
}

GridDiagram parse_grid(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> content;
  int lineno = 0;
  std::vector<int> content_lineno;
  while (std::getline(in, line)) {
    ++lineno;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    content.push_back(line);
    content_lineno.push_back(lineno);
  }
  if (content.size() != 3) {
    throw GridError("expected 3 content lines (size, X row, O row), got " +
                    std::to_string(content.size()));
  }

  int n = 0;
  {
    std::istringstream ls(content[0]);
    std::string extra;
    if (!(ls >> n) || (ls >> extra)) {
      throw GridError("line " + std::to_string(content_lineno[0]) +
                      ": expected a single grid size, got '" + content[0] + "'");
    }
    if (n < 2) {
      throw GridError("line " + std::to_string(content_lineno[0]) +
                      ": grid size must be at least 2, got " + std::to_string(n));
    }
  }

  auto parse_row = [&](const std::string& s, int ln, const char* tag) {
    std::istringstream ls(s);
    std::string head;
    ls >> head;
    if (head != std::string(tag) + ":") {
      throw GridError("line " + std::to_string(ln) + ": expected '" + tag +
                      ":' at start, got '" + head + "'");
    }
    std::vector<int> rows;
    int v;
    while (ls >> v) rows.push_back(v);
    if (!ls.eof()) {
      throw GridError("line " + std::to_string(ln) + ": non-integer entry in " + tag + " row");
    }
    if (static_cast<int>(rows.size()) != n) {
      throw GridError("line " + std::to_string(ln) + ": expected " + std::to_string(n) +
                      " entries in " + tag + " row, got " + std::to_string(rows.size()));
    }
    return rows;
  };

  std::vector<int> xs = parse_row(content[1], content_lineno[1], "X");
  std::vector<int> os = parse_row(content[2], content_lineno[2], "O");
  return GridDiagram(std::move(xs), std::move(os));
}

std::string serialize(const GridDiagram& g) {
  std::ostringstream out;
  out << g.size() << "\n";
  out << "X:";
  for (int c = 0; c < g.size(); ++c) out << ' ' << g.x_row(c);
  out << "\nO:";
  for (int c = 0; c < g.size(); ++c) out << ' ' << g.o_row(c);
  out << "\n";
  return out.str();
}

GridDiagram load_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GridError("cannot open grid file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grid(buf.str());
}

int arc_index(const GridDiagram& g) { return g.size(); }

std::vector<Marking> knot_shadow(const GridDiagram& g) {
  std::vector<Marking> marks;
  marks.reserve(static_cast<size_t>(2 * g.size()));
  for (int c = 0; c < g.size(); ++c) {
    marks.push_back({c, g.x_row(c), MarkKind::X});
    marks.push_back({c, g.o_row(c), MarkKind::O});
  }
  return marks;
}

}  // namespace rib::grid
