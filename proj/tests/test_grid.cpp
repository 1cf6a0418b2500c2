#include <doctest.h>

#include "crewsim/grid.hpp"
#include "crewsim/scenario.hpp"
#include "ucs_oracle.hpp"

using namespace crewsim;

namespace {

GridMap empty_grid(int w, int h, double res = 1.0) { return GridMap(res, w, h); }

}  // namespace

TEST_CASE("straight line on an empty 5x5 grid costs 4") {
    GridMap g = empty_grid(5, 5);
    PathResult r = plan_path(g, make_pose(0.5, 0.5), make_pose(0.5, 4.5));
    REQUIRE(r.ok());
    CHECK(r.path->cells.size() == 5);
    CHECK(r.path->cost() == doctest::Approx(4.0));
    CHECK(r.path->straight_steps == 4);
    CHECK(r.path->diagonal_steps == 0);
    CHECK(r.path->cells.front() == Cell{0, 0});
    CHECK(r.path->cells.back() == Cell{0, 4});
}

TEST_CASE("occupied or out-of-bounds endpoints are rejected, not clamped") {
    GridMap g = empty_grid(5, 5);
    g.set_occupied({0, 0}, true);
    PathResult r = plan_path(g, make_pose(0.5, 0.5), make_pose(4.5, 4.5));
    REQUIRE_FALSE(r.ok());
    CHECK(*r.error == PathError::InvalidEndpoint);

    PathResult oob = plan_path(g, make_pose(1.5, 1.5), make_pose(7.5, 1.5));
    REQUIRE_FALSE(oob.ok());
    CHECK(*oob.error == PathError::InvalidEndpoint);

    PathResult neg = plan_path(g, make_pose(-0.5, 1.5), make_pose(1.5, 1.5));
    REQUIRE_FALSE(neg.ok());
    CHECK(*neg.error == PathError::InvalidEndpoint);
}

TEST_CASE("walled-off goal reports NoPath") {
    GridMap g = empty_grid(5, 5);
    for (int y = 0; y < 5; ++y) g.set_occupied({2, y}, true);
    PathResult r = plan_path(g, make_pose(0.5, 0.5), make_pose(4.5, 0.5));
    REQUIRE_FALSE(r.ok());
    CHECK(*r.error == PathError::NoPath);
}

TEST_CASE("diagonals are not allowed to cut corners") {
    GridMap g = empty_grid(3, 3);
    // block the two orthogonal neighbours of the diagonal step
    g.set_occupied({1, 0}, true);
    g.set_occupied({0, 1}, true);
    PathResult r = plan_path_cells(g, {0, 0}, {1, 1});
    REQUIRE_FALSE(r.ok());  // fully fenced in
}

TEST_CASE("start equals goal gives a single-cell path of zero cost") {
    GridMap g = empty_grid(4, 4);
    PathResult r = plan_path_cells(g, {2, 2}, {2, 2});
    REQUIRE(r.ok());
    CHECK(r.path->cells.size() == 1);
    CHECK(r.path->cost() == 0.0);
}

TEST_CASE("path cells are 8-connected and collision free") {
    GridMap g = empty_grid(10, 10);
    for (int y = 1; y < 9; ++y) g.set_occupied({4, y}, true);
    PathResult r = plan_path_cells(g, {0, 5}, {9, 5});
    REQUIRE(r.ok());
    for (size_t i = 0; i < r.path->cells.size(); ++i) {
        CHECK_FALSE(g.occupied(r.path->cells[i]));
        if (i > 0) {
            int dx = std::abs(r.path->cells[i].x - r.path->cells[i - 1].x);
            int dy = std::abs(r.path->cells[i].y - r.path->cells[i - 1].y);
            CHECK(std::max(dx, dy) == 1);
        }
    }
}

TEST_CASE("plans are deterministic") {
    GridMap g = empty_grid(12, 12);
    SeededRng rng(7);
    for (int i = 0; i < 20; ++i) {
        g.set_occupied({static_cast<int>(rng.below(12)), static_cast<int>(rng.below(12))}, true);
    }
    g.set_occupied({0, 0}, false);
    g.set_occupied({11, 11}, false);
    PathResult a = plan_path_cells(g, {0, 0}, {11, 11});
    PathResult b = plan_path_cells(g, {0, 0}, {11, 11});
    REQUIRE(a.ok() == b.ok());
    if (a.ok()) CHECK(a.path->cells == b.path->cells);
}

TEST_CASE("A* matches a uniform-cost-search oracle on 100 seeded 20x20 grids") {
    int solvable = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        GridMap g = empty_grid(20, 20);
        SeededRng rng(seed * 7919 + 13);
        for (int y = 0; y < 20; ++y) {
            for (int x = 0; x < 20; ++x) {
                if (rng.below(100) < 25) g.set_occupied({x, y}, true);
            }
        }
        Cell start{0, 0};
        Cell goal{19, 19};
        PathResult planned = plan_path_cells(g, start, goal);
        testing::UcsResult oracle = testing::ucs_cost(g, start, goal);
        if (oracle.invalid_endpoint) {
            REQUIRE_FALSE(planned.ok());
            CHECK(*planned.error == PathError::InvalidEndpoint);
            continue;
        }
        if (!oracle.reachable) {
            REQUIRE_FALSE(planned.ok());
            CHECK(*planned.error == PathError::NoPath);
            continue;
        }
        ++solvable;
        REQUIRE(planned.ok());
        // identical cost model: the comparison is exact, no tolerance
        CHECK(planned.path->cost() == oracle.cost());
    }
    CHECK(solvable > 10);  // the sweep must actually exercise solvable instances
}

TEST_CASE("world<->cell conversion is exact at boundaries") {
    GridMap g(0.1, 10, 10);
    CHECK(g.cell_at(0.0, 0.0) == Cell{0, 0});
    CHECK(g.cell_at(0.999, 0.999) == Cell{9, 9});
    CHECK_FALSE(g.cell_at(1.0, 0.5).has_value());
    CHECK_FALSE(g.cell_at(0.5, -0.01).has_value());
    Pose2D c = g.cell_center({3, 7});
    CHECK(c.x == doctest::Approx(0.35));
    CHECK(c.y == doctest::Approx(0.75));
}
