#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rib::grid {

/// Raised on malformed grid files and on invariant violations. Messages
/// carry line/column context where available.
class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MarkKind : uint8_t { X, O };

struct Marking {
  int column = 0;
  int row = 0;
  MarkKind kind = MarkKind::X;

  bool operator==(const Marking&) const = default;
};

/// A knot (or link) presented on a size x size toroidal grid: one X and one
/// O per row and per column, never sharing a cell. xs[c] / os[c] give the
/// row of the X / O marking in column c. Coordinates are zero-based with
/// row 0 at the bottom.
class GridDiagram {
 public:
  GridDiagram(std::vector<int> xs, std::vector<int> os);

  int size() const { return static_cast<int>(xs_.size()); }
  const std::vector<int>& xs() const { return xs_; }
  const std::vector<int>& os() const { return os_; }
  int x_row(int col) const { return xs_[static_cast<size_t>(col)]; }
  int o_row(int col) const { return os_[static_cast<size_t>(col)]; }

  /// Number of link components: cycles of the walk that follows the
  /// vertical segment of a column to its O, then the horizontal segment
  /// of that row back to an X.
  int component_count() const;
  bool is_knot() const { return component_count() == 1; }

  bool operator==(const GridDiagram&) const = default;

 private:
  std::vector<int> xs_;
  std::vector<int> os_;
};

/// Parses the grid file format:
///   line 1: the grid size
///   line 2: "X:" followed by size space-separated rows
///   line 3: "O:" likewise
/// Lines starting with '#' are comments. All invariants are checked;
/// nothing is silently repaired.
GridDiagram parse_grid(const std::string& text);

/// Canonical text form; parse_grid(serialize(g)) == g, and serialization is
/// byte-stable.
std::string serialize(const GridDiagram& g);

GridDiagram load_grid_file(const std::string& path);

/// The size of the given grid. Equals the arc index only when the grid is a
/// minimal presentation of its knot, which is the caller's responsibility.
int arc_index(const GridDiagram& g);

/// All 2*size markings in column order, X before O within each column.
std::vector<Marking> knot_shadow(const GridDiagram& g);

}  // namespace rib::grid
