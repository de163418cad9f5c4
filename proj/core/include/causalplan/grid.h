// Occupancy grids backing the built-in externals pathExists/2 and
// timeEstimate/2.

#ifndef CAUSALPLAN_GRID_H_
#define CAUSALPLAN_GRID_H_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causalplan/grounder.h"

namespace causalplan {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Cell {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Coordinates are 0-based; x is the column, y the row (row 0 first in the
// file). Movement is 4-connected with unit cost per cell.
class GridWorld {
 public:
  GridWorld() = default;
  GridWorld(int width, int height);

  // One row per line: `#` blocked, `.` free, `A`..`Z` a free cell carrying
  // landmark L1..L26.
  static GridWorld Parse(std::string_view text);
  std::string ToText() const;

  int width() const { return width_; }
  int height() const { return height_; }
  bool InBounds(Cell c) const;
  bool IsBlocked(Cell c) const;
  void Block(Cell c);
  void SetLandmark(const std::string& name, Cell c);
  const std::map<std::string, Cell>& landmarks() const { return landmarks_; }
  Cell Landmark(const std::string& name) const;

  std::vector<Cell> FreeNeighbors(Cell c) const;
  // Shortest 4-connected path length in cells between two free cells.
  std::optional<int> Distance(Cell from, Cell to) const;

  bool PathExists(const std::string& from, const std::string& to) const;
  // Empty when the landmarks are disconnected.
  std::optional<int> TimeEstimate(const std::string& from,
                                  const std::string& to) const;

  friend bool operator==(const GridWorld&, const GridWorld&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<bool> blocked_;
  std::map<std::string, Cell> landmarks_;
};

// "L1".."L26" for landmark letters A..Z.
std::string LandmarkName(char letter);

// Registers pathExists/2 and timeEstimate/2 over a copy of `world`.
void RegisterGridExternals(const GridWorld& world, ExternalRegistry& registry);

}  // namespace causalplan

#endif  // CAUSALPLAN_GRID_H_
