#include "navr1/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "navr1/util.hpp"

namespace navr1 {
namespace {

constexpr double kAlignToleranceDeg = 15.0;

double wrap180(double deg) {
  double a = std::fmod(deg, 360.0);
  if (a <= -180.0) a += 360.0;
  if (a > 180.0) a -= 360.0;
  return a;
}

// Bearing (degrees, 0 = +y, counterclockwise) from a point to a target.
double bearing_deg(double from_x, double from_y, double to_x, double to_y) {
  return std::atan2(-(to_x - from_x), to_y - from_y) * 180.0 / M_PI;
}

double dist_to_goal(const World& world, const std::vector<double>& field,
                    const Pose& pose, const Cell& goal) {
  Cell c = world.cell_at(pose.x, pose.y);
  if (c == goal) {
    double gx, gy;
    world.cell_center(goal, gx, gy);
    return std::hypot(gx - pose.x, gy - pose.y);
  }
  return field[static_cast<std::size_t>(c.cy) * world.size + c.cx];
}

// Descent neighbor on the goal distance field, fixed (dy, dx) tie order.
Cell descend(const World& world, const std::vector<double>& field, const Cell& c) {
  Cell best = c;
  double best_score = std::numeric_limits<double>::infinity();
  const double diag = std::sqrt(2.0) * kCellSize;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      Cell nb{c.cx + dx, c.cy + dy};
      if (world.is_blocked(nb)) continue;
      if (dx != 0 && dy != 0 &&
          (world.is_blocked({c.cx + dx, c.cy}) || world.is_blocked({c.cx, c.cy + dy}))) {
        continue;
      }
      double step = (dx != 0 && dy != 0) ? diag : kCellSize;
      double score = field[static_cast<std::size_t>(nb.cy) * world.size + nb.cx] + step;
      if (score < best_score) {
        best_score = score;
        best = nb;
      }
    }
  }
  return best;
}

// One follower decision; shared by expert_next_actions and build_episode so
// labels and roll-outs cannot drift apart.
Action follower_step(const World& world, const std::vector<double>& field,
                     const Pose& pose, const Cell& goal) {
  if (dist_to_goal(world, field, pose, goal) < kSuccessThreshold) {
    return Action::Stop;
  }
  Cell here = world.cell_at(pose.x, pose.y);
  Cell next = descend(world, field, here);
  double tx, ty;
  world.cell_center(next, tx, ty);
  double err = wrap180(bearing_deg(pose.x, pose.y, tx, ty) - pose.heading);
  if (std::abs(err) > kAlignToleranceDeg) {
    return err > 0 ? Action::TurnLeft : Action::TurnRight;
  }
  StepResult fwd = apply_action(world, pose, Action::Forward);
  if (fwd.collided) {
    return err >= 0 ? Action::TurnLeft : Action::TurnRight;
  }
  return Action::Forward;
}

}  // namespace

ExpertPath shortest_path(const World& world, const Cell& start, const Cell& goal) {
  if (world.is_blocked(start) || world.is_blocked(goal)) {
    throw ContractError("shortest_path endpoint on blocked cell");
  }
  const std::size_t n = static_cast<std::size_t>(world.size) * world.size;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<int> parent(n, -1);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  auto idx_of = [&](const Cell& c) {
    return static_cast<std::size_t>(c.cy) * world.size + c.cx;
  };
  dist[idx_of(start)] = 0.0;
  pq.push({0.0, idx_of(start)});
  const double diag = std::sqrt(2.0) * kCellSize;
  while (!pq.empty()) {
    auto [d, idx] = pq.top();
    pq.pop();
    if (d > dist[idx]) continue;
    int cx = static_cast<int>(idx % world.size);
    int cy = static_cast<int>(idx / world.size);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        Cell nb{cx + dx, cy + dy};
        if (world.is_blocked(nb)) continue;
        if (dx != 0 && dy != 0 &&
            (world.is_blocked({cx + dx, cy}) || world.is_blocked({cx, cy + dy}))) {
          continue;
        }
        double nd = d + ((dx != 0 && dy != 0) ? diag : kCellSize);
        std::size_t nidx = idx_of(nb);
        if (nd < dist[nidx]) {
          dist[nidx] = nd;
          parent[nidx] = static_cast<int>(idx);
          pq.push({nd, nidx});
        }
      }
    }
  }
  ExpertPath path;
  std::size_t cur = idx_of(goal);
  if (!std::isfinite(dist[cur])) {
    throw ContractError("shortest_path: goal unreachable");
  }
  path.total_length = dist[cur];
  std::vector<Cell> rev;
  for (;;) {
    rev.push_back(Cell{static_cast<int>(cur % world.size),
                       static_cast<int>(cur / world.size)});
    if (parent[cur] < 0) break;
    cur = static_cast<std::size_t>(parent[cur]);
  }
  path.waypoints.assign(rev.rbegin(), rev.rend());
  return path;
}

std::vector<Action> expert_next_actions(const World& world, const Pose& pose,
                                        const Cell& goal, int n) {
  if (n < 1) throw ContractError("expert_next_actions: n must be >= 1");
  auto field = distance_field(world, goal);
  std::vector<Action> out;
  out.reserve(n);
  Pose p = pose;
  bool stopped = false;
  for (int i = 0; i < n; ++i) {
    if (stopped) {
      out.push_back(Action::Stop);
      continue;
    }
    Action a = follower_step(world, field, p, goal);
    out.push_back(a);
    StepResult r = apply_action(world, p, a);
    p = r.pose;
    stopped = r.stopped;
  }
  return out;
}

std::optional<Episode> build_episode(const World& world, const Pose& start,
                                     const Cell& goal) {
  auto field = distance_field(world, goal);
  Cell start_cell = world.cell_at(start.x, start.y);
  double start_dist =
      field[static_cast<std::size_t>(start_cell.cy) * world.size + start_cell.cx];
  if (!std::isfinite(start_dist)) return std::nullopt;

  Episode ep;
  ep.world = world;
  ep.start = start;
  ep.goal = goal;
  ep.shortest_length = start_dist;
  Pose p = start;
  for (int t = 0; t < kEpisodeCap; ++t) {
    ep.poses.push_back(p);
    ep.frames.push_back(render_frame(world, p, t));
    Action a = follower_step(world, field, p, goal);
    ep.actions.push_back(a);
    StepResult r = apply_action(world, p, a);
    if (r.stopped) return ep;
    p = r.pose;
  }
  return std::nullopt;  // cap exceeded; caller resamples
}

}  // namespace navr1
