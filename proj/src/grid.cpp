#include "crewsim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace crewsim {

namespace {

constexpr double kSqrt2 = 1.41421356237309514547462185873882845;  // == std::sqrt(2.0)

struct OpenEntry {
    double f;
    double h;
    Cell cell;

    // std::priority_queue is a max-heap; we want the smallest (f, h, y, x).
    bool operator<(const OpenEntry& o) const {
        if (f != o.f) return f > o.f;
        if (h != o.h) return h > o.h;
        if (cell.y != o.cell.y) return cell.y > o.cell.y;
        return cell.x > o.cell.x;
    }
};

struct NodeInfo {
    double g = -1.0;  // < 0 means unvisited
    int straight = 0;
    int diagonal = 0;
    Cell parent{-1, -1};
    bool closed = false;
};

}  // namespace

double Path::cost() const {
    return static_cast<double>(straight_steps) + static_cast<double>(diagonal_steps) * kSqrt2;
}

double octile_distance(Cell a, Cell b) {
    double dx = std::abs(a.x - b.x);
    double dy = std::abs(a.y - b.y);
    return std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
}

PathResult plan_path_cells(const GridMap& grid, Cell start, Cell goal) {
    if (!grid.free_at(start) || !grid.free_at(goal)) {
        return PathResult::failure(PathError::InvalidEndpoint);
    }
    if (start == goal) {
        Path p;
        p.cells = {start};
        return PathResult::success(std::move(p));
    }

    const int w = grid.width();
    std::vector<NodeInfo> info(static_cast<size_t>(w) * static_cast<size_t>(grid.height()));
    auto at = [&](Cell c) -> NodeInfo& {
        return info[static_cast<size_t>(c.y) * static_cast<size_t>(w) + static_cast<size_t>(c.x)];
    };

    std::priority_queue<OpenEntry> open;
    at(start).g = 0.0;
    open.push({octile_distance(start, goal), octile_distance(start, goal), start});

    static const int dxs[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
    static const int dys[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

    while (!open.empty()) {
        OpenEntry top = open.top();
        open.pop();
        NodeInfo& cur = at(top.cell);
        if (cur.closed) continue;
        cur.closed = true;

        if (top.cell == goal) {
            Path p;
            p.straight_steps = cur.straight;
            p.diagonal_steps = cur.diagonal;
            Cell c = goal;
            while (!(c == start)) {
                p.cells.push_back(c);
                c = at(c).parent;
            }
            p.cells.push_back(start);
            std::reverse(p.cells.begin(), p.cells.end());
            return PathResult::success(std::move(p));
        }

        for (int i = 0; i < 8; ++i) {
            Cell nb{top.cell.x + dxs[i], top.cell.y + dys[i]};
            if (!grid.free_at(nb)) continue;
            bool diagonal = dxs[i] != 0 && dys[i] != 0;
            if (diagonal) {
                // no corner cutting: both orthogonal neighbours must be free
                if (!grid.free_at({top.cell.x + dxs[i], top.cell.y}) ||
                    !grid.free_at({top.cell.x, top.cell.y + dys[i]})) {
                    continue;
                }
            }
            double step = diagonal ? kSqrt2 : 1.0;
            double ng = cur.g + step;
            NodeInfo& ninfo = at(nb);
            if (ninfo.g >= 0.0 && ninfo.g <= ng) continue;
            ninfo.g = ng;
            ninfo.straight = cur.straight + (diagonal ? 0 : 1);
            ninfo.diagonal = cur.diagonal + (diagonal ? 1 : 0);
            ninfo.parent = top.cell;
            double h = octile_distance(nb, goal);
            open.push({ng + h, h, nb});
        }
    }
    return PathResult::failure(PathError::NoPath);
}

PathResult plan_path(const GridMap& grid, const Pose2D& start, const Pose2D& goal) {
    auto sc = grid.cell_at(start.x, start.y);
    auto gc = grid.cell_at(goal.x, goal.y);
    if (!sc || !gc) return PathResult::failure(PathError::InvalidEndpoint);
    return plan_path_cells(grid, *sc, *gc);
}

}  // namespace crewsim
