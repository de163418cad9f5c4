#include "causalplan/grid.h"

#include <deque>
#include <memory>
#include <sstream>

namespace causalplan {

GridWorld::GridWorld(int width, int height)
    : width_(width), height_(height), blocked_(width * height, false) {
  if (width <= 0 || height <= 0) {
    throw GeometryError("grid dimensions must be positive");
  }
}

std::string LandmarkName(char letter) {
  return "L" + std::to_string(letter - 'A' + 1);
}

GridWorld GridWorld::Parse(std::string_view text) {
  std::vector<std::string> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    rows.push_back(line);
  }
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  if (rows.empty()) throw GeometryError("empty world");
  const int width = static_cast<int>(rows.front().size());
  if (width == 0) throw GeometryError("world row 1 is empty");
  GridWorld world(width, static_cast<int>(rows.size()));
  for (int y = 0; y < world.height_; ++y) {
    if (static_cast<int>(rows[y].size()) != width) {
      throw GeometryError("world row " + std::to_string(y + 1) +
                          " has a different width");
    }
    for (int x = 0; x < width; ++x) {
      const char ch = rows[y][x];
      if (ch == '#') {
        world.Block({x, y});
      } else if (ch >= 'A' && ch <= 'Z') {
        const std::string name = LandmarkName(ch);
        if (world.landmarks_.count(name)) {
          throw GeometryError("landmark " + std::string(1, ch) + " appears twice");
        }
        world.SetLandmark(name, {x, y});
      } else if (ch != '.') {
        throw GeometryError("unexpected character '" + std::string(1, ch) +
                            "' in world row " + std::to_string(y + 1));
      }
    }
  }
  return world;
}

std::string GridWorld::ToText() const {
  std::vector<std::string> rows(height_, std::string(width_, '.'));
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (IsBlocked({x, y})) rows[y][x] = '#';
    }
  }
  for (const auto& [name, cell] : landmarks_) {
    const int index = std::stoi(name.substr(1));
    rows[cell.y][cell.x] = static_cast<char>('A' + index - 1);
  }
  std::string out;
  for (const std::string& r : rows) out += r + "\n";
  return out;
}

bool GridWorld::InBounds(Cell c) const {
  return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
}

bool GridWorld::IsBlocked(Cell c) const {
  return !InBounds(c) || blocked_[c.y * width_ + c.x];
}

void GridWorld::Block(Cell c) {
  if (!InBounds(c)) throw GeometryError("cell out of bounds");
  for (const auto& [name, cell] : landmarks_) {
    if (cell == c) throw GeometryError("cannot block landmark " + name);
  }
  blocked_[c.y * width_ + c.x] = true;
}

void GridWorld::SetLandmark(const std::string& name, Cell c) {
  if (IsBlocked(c)) {
    throw GeometryError("landmark " + name + " is not on a free cell");
  }
  landmarks_[name] = c;
}

Cell GridWorld::Landmark(const std::string& name) const {
  auto it = landmarks_.find(name);
  if (it == landmarks_.end()) throw GeometryError("unknown landmark '" + name + "'");
  return it->second;
}

std::vector<Cell> GridWorld::FreeNeighbors(Cell c) const {
  std::vector<Cell> out;
  const Cell steps[] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
  for (Cell d : steps) {
    const Cell n{c.x + d.x, c.y + d.y};
    if (!IsBlocked(n)) out.push_back(n);
  }
  return out;
}

std::optional<int> GridWorld::Distance(Cell from, Cell to) const {
  if (IsBlocked(from) || IsBlocked(to)) return std::nullopt;
  std::vector<int> dist(width_ * height_, -1);
  std::deque<Cell> queue = {from};
  dist[from.y * width_ + from.x] = 0;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    const int d = dist[c.y * width_ + c.x];
    if (c == to) return d;
    for (Cell n : FreeNeighbors(c)) {
      int& nd = dist[n.y * width_ + n.x];
      if (nd >= 0) continue;
      nd = d + 1;
      queue.push_back(n);
    }
  }
  return std::nullopt;
}

bool GridWorld::PathExists(const std::string& from, const std::string& to) const {
  return TimeEstimate(from, to).has_value();
}

std::optional<int> GridWorld::TimeEstimate(const std::string& from,
                                           const std::string& to) const {
  return Distance(Landmark(from), Landmark(to));
}

void RegisterGridExternals(const GridWorld& world, ExternalRegistry& registry) {
  auto shared = std::make_shared<const GridWorld>(world);
  registry.RegisterPredicate(
      "pathExists", 2, [shared](std::span<const std::string> args) {
        return shared->PathExists(args[0], args[1]);
      });
  registry.RegisterFunction(
      "timeEstimate", 2,
      [shared](std::span<const std::string> args) -> std::optional<std::int64_t> {
        std::optional<int> d = shared->TimeEstimate(args[0], args[1]);
        if (!d) return std::nullopt;
        return *d;
      });
}

}  // namespace causalplan
