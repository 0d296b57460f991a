// Copyright 2026 The Entropic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENTROPIC_ARENA_HPP
#define ENTROPIC_ARENA_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace entropic {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians, 0 = +x axis

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Error raised while reading any of the text formats. Carries the 1-based
/// line number the problem was found on (0 when not line-specific).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class Cell : std::uint8_t { Wall, Free };

struct CellIndex {
  int col = 0;
  int row = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Closed grid world. Cell (col, row) covers
/// [col * cell_size, (col + 1) * cell_size) x [row * cell_size, (row + 1) * cell_size);
/// row 0 is the first map line of the arena file. Immutable once built.
class Arena {
 public:
  Arena(int width, int height, double cell_size, std::vector<Cell> cells, Pose start)
      : width_(width), height_(height), cell_size_(cell_size), cells_(std::move(cells)), start_(start) {
    if (width_ < 3 || height_ < 3) throw std::invalid_argument("arena must be at least 3x3");
    if (!(cell_size_ > 0.0)) throw std::invalid_argument("cell_size must be positive");
    if (cells_.size() != static_cast<std::size_t>(width_) * height_)
      throw std::invalid_argument("cell grid does not match arena dimensions");
    for (int c = 0; c < width_; ++c)
      if (cell(c, 0) != Cell::Wall || cell(c, height_ - 1) != Cell::Wall)
        throw std::invalid_argument("arena border is open");
    for (int r = 0; r < height_; ++r)
      if (cell(0, r) != Cell::Wall || cell(width_ - 1, r) != Cell::Wall)
        throw std::invalid_argument("arena border is open");
    if (!is_free(start_.position())) throw std::invalid_argument("start pose is not in a free cell");
    for (Cell c : cells_) free_cells_ += c == Cell::Free ? 1 : 0;
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double cell_size() const noexcept { return cell_size_; }
  const Pose& start_pose() const noexcept { return start_; }
  std::size_t cell_count() const noexcept { return cells_.size(); }
  std::size_t free_cell_count() const noexcept { return free_cells_; }
  double diagonal() const noexcept { return std::hypot(width_ * cell_size_, height_ * cell_size_); }

  Cell cell(int col, int row) const { return cells_[linear(col, row)]; }
  Cell cell(std::size_t linear_index) const { return cells_[linear_index]; }

  bool in_bounds(int col, int row) const noexcept {
    return col >= 0 && row >= 0 && col < width_ && row < height_;
  }

  bool is_free_cell(int col, int row) const noexcept {
    return in_bounds(col, row) && cells_[linear(col, row)] == Cell::Free;
  }

  std::size_t linear(int col, int row) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
  }

  /// floor(coord / cell_size); nullopt outside the grid. Points on a cell
  /// boundary belong to the higher-index cell.
  std::optional<CellIndex> cell_of(Vec2 p) const noexcept {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return std::nullopt;
    const double fc = std::floor(p.x / cell_size_);
    const double fr = std::floor(p.y / cell_size_);
    if (fc < 0 || fr < 0 || fc >= width_ || fr >= height_) return std::nullopt;
    return CellIndex{static_cast<int>(fc), static_cast<int>(fr)};
  }

  bool is_free(Vec2 p) const noexcept {
    const auto c = cell_of(p);
    return c && cells_[linear(c->col, c->row)] == Cell::Free;
  }

  Vec2 cell_center(CellIndex c) const noexcept {
    return {(c.col + 0.5) * cell_size_, (c.row + 0.5) * cell_size_};
  }

  /// Distance from `origin` to the first wall-cell boundary along the ray,
  /// clamped to `max_range`. Walks the grid cell by cell (voxel traversal), so
  /// the result is exact up to floating-point rounding.
  double raycast(Vec2 origin, double angle, double max_range) const {
    if (!(max_range > 0.0)) throw std::invalid_argument("raycast: max_range must be positive");
    const auto start = cell_of(origin);
    if (!start || cell(start->col, start->row) != Cell::Free)
      throw std::domain_error("raycast: origin is not in free space");

    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
    const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
    constexpr double kInf = std::numeric_limits<double>::infinity();

    int col = start->col;
    int row = start->row;
    // Ray parameter at which the next vertical/horizontal boundary is crossed.
    // Recomputed from the boundary index each time instead of accumulated.
    auto next_x = [&] {
      if (step_x == 0) return kInf;
      const double boundary = (step_x > 0 ? col + 1 : col) * cell_size_;
      return (boundary - origin.x) / dx;
    };
    auto next_y = [&] {
      if (step_y == 0) return kInf;
      const double boundary = (step_y > 0 ? row + 1 : row) * cell_size_;
      return (boundary - origin.y) / dy;
    };

    double t_x = next_x();
    double t_y = next_y();
    for (;;) {
      double t;
      if (t_x < t_y) {
        t = t_x;
        col += step_x;
        t_x = next_x();
      } else {
        t = t_y;
        row += step_y;
        t_y = next_y();
      }
      if (t >= max_range) return max_range;
      if (!is_free_cell(col, row)) return std::max(t, 0.0);
    }
  }

 private:
  int width_;
  int height_;
  double cell_size_;
  std::vector<Cell> cells_;
  Pose start_;
  std::size_t free_cells_ = 0;
};

namespace detail {

inline std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

inline bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

template <class T>
bool parse_number(std::string_view token, T& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace detail

/// Parses the text arena format:
///
///   % comment
///   arena <width> <height> <cell_size>
///   <height rows of exactly <width> chars from '#', '.', 'S'>
///
/// 'S' marks the single start cell; the robot starts at its center facing +x.
inline Arena load_arena(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    ++line_no;
    line = detail::trim_cr(line);
    if (line.empty() || line.front() != '%') lines.emplace_back(line_no, line);
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }

  auto it = lines.begin();
  while (it != lines.end() && detail::is_blank(it->second)) ++it;
  if (it == lines.end()) throw ParseError(line_no, "missing 'arena' header");

  const std::size_t header_line = it->first;
  std::istringstream header{std::string(it->second)};
  std::string keyword, w_tok, h_tok, cs_tok, extra;
  header >> keyword >> w_tok >> h_tok >> cs_tok;
  int width = 0, height = 0;
  double cell_size = 0.0;
  if (keyword != "arena" || !detail::parse_number(w_tok, width) || !detail::parse_number(h_tok, height) ||
      !detail::parse_number(cs_tok, cell_size) || (header >> extra))
    throw ParseError(header_line, "malformed header, expected 'arena <width> <height> <cell_size>'");
  if (width <= 0 || height <= 0 || !(cell_size > 0.0) || !std::isfinite(cell_size))
    throw ParseError(header_line, "arena dimensions and cell_size must be positive");
  if (width < 3 || height < 3) throw ParseError(header_line, "arena must be at least 3x3");
  ++it;

  std::vector<Cell> cells;
  cells.reserve(static_cast<std::size_t>(width) * height);
  std::optional<CellIndex> start;
  for (int row = 0; row < height; ++row, ++it) {
    if (it == lines.end()) throw ParseError(line_no, "expected " + std::to_string(height) + " map rows, got " + std::to_string(row));
    const auto [ln, line] = *it;
    if (static_cast<int>(line.size()) != width)
      throw ParseError(ln, "ragged row: expected " + std::to_string(width) + " characters, got " + std::to_string(line.size()));
    for (int col = 0; col < width; ++col) {
      switch (line[col]) {
        case '#': cells.push_back(Cell::Wall); break;
        case '.': cells.push_back(Cell::Free); break;
        case 'S':
          if (start) throw ParseError(ln, "multiple start markers");
          start = CellIndex{col, row};
          cells.push_back(Cell::Free);
          break;
        default:
          throw ParseError(ln, std::string("unexpected character '") + line[col] + "'");
      }
      const bool border = row == 0 || col == 0 || row == height - 1 || col == width - 1;
      if (border && cells.back() != Cell::Wall) throw ParseError(ln, "open border at column " + std::to_string(col));
    }
  }
  for (; it != lines.end(); ++it)
    if (!detail::is_blank(it->second)) throw ParseError(it->first, "unexpected content after map rows");
  if (!start) throw ParseError(line_no, "no start marker 'S'");

  const Pose pose{(start->col + 0.5) * cell_size, (start->row + 0.5) * cell_size, 0.0};
  return Arena(width, height, cell_size, std::move(cells), pose);
}

inline Arena load_arena_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open arena file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_arena(buf.str());
}

/// Per-cell visit counters over an arena's grid. Wall cells stay at zero.
class PatrolGrid {
 public:
  PatrolGrid() = default;
  PatrolGrid(int width, int height) : width_(width), height_(height), counts_(static_cast<std::size_t>(width) * height, 0) {}
  explicit PatrolGrid(const Arena& arena) : PatrolGrid(arena.width(), arena.height()) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const std::vector<std::uint32_t>& counts() const noexcept { return counts_; }
  std::uint32_t count(int col, int row) const {
    return counts_[static_cast<std::size_t>(row) * width_ + col];
  }
  std::uint32_t count(std::size_t linear_index) const { return counts_[linear_index]; }

  std::uint64_t total() const noexcept {
    std::uint64_t sum = 0;
    for (auto c : counts_) sum += c;
    return sum;
  }

  void record_visit(const Arena& arena, Vec2 p) {
    const auto c = arena.cell_of(p);
    if (!c || arena.cell(c->col, c->row) != Cell::Free)
      throw std::domain_error("record_visit: point is not in free space");
    ++counts_[arena.linear(c->col, c->row)];
  }

  void add(std::size_t linear_index, std::uint32_t n) { counts_.at(linear_index) += n; }

  PatrolGrid& merge(const PatrolGrid& other) {
    if (other.width_ != width_ || other.height_ != height_) throw std::invalid_argument("PatrolGrid::merge: size mismatch");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    return *this;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint32_t> counts_;
};

}  // namespace entropic

#endif  // ENTROPIC_ARENA_HPP
