#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crewsim/geometry.hpp"

namespace crewsim {

struct Cell {
    int x = 0;
    int y = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Occupancy grid. World coordinates live in
/// [0, width*resolution) x [0, height*resolution); cell (0,0) is the
/// south-west corner. Out-of-bounds world coordinates are rejected by
/// cell_at, never clamped.
class GridMap {
public:
    GridMap() : GridMap(0.1, 1, 1) {}
    GridMap(double resolution, int width, int height)
        : resolution_(resolution),
          width_(width),
          height_(height),
          occupied_(static_cast<size_t>(width) * static_cast<size_t>(height), 0) {}

    double resolution() const { return resolution_; }
    int width() const { return width_; }
    int height() const { return height_; }

    bool in_bounds(Cell c) const {
        return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
    }

    bool occupied(Cell c) const { return occupied_[index(c)] != 0; }
    void set_occupied(Cell c, bool v) { occupied_[index(c)] = v ? 1 : 0; }

    bool free_at(Cell c) const { return in_bounds(c) && !occupied(c); }

    /// Cell containing a world point, or nullopt when out of bounds.
    std::optional<Cell> cell_at(double wx, double wy) const {
        if (wx < 0.0 || wy < 0.0) return std::nullopt;
        Cell c{static_cast<int>(wx / resolution_), static_cast<int>(wy / resolution_)};
        if (!in_bounds(c)) return std::nullopt;
        return c;
    }

    Pose2D cell_center(Cell c) const {
        return Pose2D{(c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_, 0.0};
    }

    const std::vector<std::uint8_t>& raw() const { return occupied_; }

private:
    size_t index(Cell c) const {
        return static_cast<size_t>(c.y) * static_cast<size_t>(width_) + static_cast<size_t>(c.x);
    }

    double resolution_;
    int width_;
    int height_;
    std::vector<std::uint8_t> occupied_;
};

enum class PathError {
    InvalidEndpoint,  // start or goal occupied / out of bounds
    NoPath,
};

struct Path {
    std::vector<Cell> cells;
    int straight_steps = 0;
    int diagonal_steps = 0;

    /// Canonical cost: straight steps cost 1, diagonal steps sqrt(2).
    /// Computed from the step counts in one fixed order so two planners
    /// that agree on the step mix produce bit-identical doubles.
    double cost() const;
};

struct PathResult {
    std::optional<Path> path;
    std::optional<PathError> error;

    bool ok() const { return path.has_value(); }
    static PathResult success(Path p) { return PathResult{std::move(p), std::nullopt}; }
    static PathResult failure(PathError e) { return PathResult{std::nullopt, e}; }
};

/// A* over the 8-connected grid. Diagonal moves are allowed only when both
/// adjacent orthogonal cells are free (no corner cutting). Ties in the open
/// list break on (lower heuristic, lower row, lower column) so the returned
/// path is deterministic.
PathResult plan_path(const GridMap& grid, const Pose2D& start, const Pose2D& goal);

/// Same search between explicit cells (endpoints already resolved).
PathResult plan_path_cells(const GridMap& grid, Cell start, Cell goal);

double octile_distance(Cell a, Cell b);

}  // namespace crewsim
