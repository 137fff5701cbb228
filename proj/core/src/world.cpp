#include "navr1/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "navr1/rng.hpp"
#include "navr1/util.hpp"

namespace navr1 {

const char* action_name(Action a) {
  switch (a) {
    case Action::Forward: return "FORWARD";
    case Action::TurnLeft: return "TURN-LEFT";
    case Action::TurnRight: return "TURN-RIGHT";
    case Action::Stop: return "STOP";
  }
  return "?";
}

void heading_dir(int heading, double& dx, double& dy) {
  double rad = heading * M_PI / 180.0;
  dx = -std::sin(rad);
  dy = std::cos(rad);
}

const char* split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::ValSeen: return "val-seen";
    case Split::ValUnseen: return "val-unseen";
  }
  return "?";
}

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::Train;
  if (name == "val-seen") return Split::ValSeen;
  if (name == "val-unseen") return Split::ValUnseen;
  throw ConfigError("unknown split '" + name + "'");
}

Cell World::cell_at(double x, double y) const {
  return Cell{static_cast<int>(std::floor(x / kCellSize)),
              static_cast<int>(std::floor(y / kCellSize))};
}

void World::cell_center(const Cell& c, double& x, double& y) const {
  x = (c.cx + 0.5) * kCellSize;
  y = (c.cy + 0.5) * kCellSize;
}

int World::landmark_at(const Cell& c) const {
  for (const auto& lm : landmarks) {
    if (lm.cell == c) return lm.name_id + 1;
  }
  return 0;
}

const std::vector<std::string>& landmark_names() {
  static const std::vector<std::string> names = {
      "red",   "blue",  "green",  "amber", "coral", "ivory", "jade",  "onyx",
      "pearl", "plum",  "rose",   "rust",  "sage",  "slate", "teal",  "topaz",
      "aqua",  "beige", "bronze", "copper", "gold",  "lilac", "mint",  "navy"};
  return names;
}

namespace {

struct Region {
  int x0, y0, x1, y1;  // inclusive
  int w() const { return x1 - x0 + 1; }
  int h() const { return y1 - y0 + 1; }
};

void carve_cell(World& w, int cx, int cy) {
  if (cx < 1 || cy < 1 || cx > w.size - 2 || cy > w.size - 2) return;
  w.blocked[static_cast<std::size_t>(cy) * w.size + cx] = 0;
}

void carve_corridor(World& w, Cell a, Cell b, bool horizontal_first) {
  int x = a.cx, y = a.cy;
  auto carve_x = [&] {
    int step = b.cx > x ? 1 : -1;
    while (x != b.cx) {
      carve_cell(w, x, y);
      x += step;
    }
  };
  auto carve_y = [&] {
    int step = b.cy > y ? 1 : -1;
    while (y != b.cy) {
      carve_cell(w, x, y);
      y += step;
    }
  };
  if (horizontal_first) {
    carve_x();
    carve_y();
  } else {
    carve_y();
    carve_x();
  }
  carve_cell(w, b.cx, b.cy);
}

// Recursive partition; carves a room per leaf and a corridor per split.
// Returns a representative carved cell of the subtree.
Cell partition(World& w, Rng& rng, const Region& r, int depth) {
  constexpr int kMaxLeaf = 13;
  constexpr int kMinSide = 6;
  bool can_split_x = r.w() >= 2 * kMinSide;
  bool can_split_y = r.h() >= 2 * kMinSide;
  bool should_split = (r.w() > kMaxLeaf || r.h() > kMaxLeaf) && depth < 16;
  if (should_split && (can_split_x || can_split_y)) {
    bool split_x = can_split_x && (!can_split_y || r.w() >= r.h());
    if (split_x) {
      int cut = r.x0 + kMinSide - 1 +
                static_cast<int>(rng.uniform_int(r.w() - 2 * kMinSide + 1));
      Cell left = partition(w, rng, {r.x0, r.y0, cut, r.y1}, depth + 1);
      Cell right = partition(w, rng, {cut + 1, r.y0, r.x1, r.y1}, depth + 1);
      carve_corridor(w, left, right, rng.uniform_int(2) == 0);
      return rng.uniform_int(2) == 0 ? left : right;
    }
    int cut = r.y0 + kMinSide - 1 +
              static_cast<int>(rng.uniform_int(r.h() - 2 * kMinSide + 1));
    Cell bottom = partition(w, rng, {r.x0, r.y0, r.x1, cut}, depth + 1);
    Cell top = partition(w, rng, {r.x0, cut + 1, r.x1, r.y1}, depth + 1);
    carve_corridor(w, bottom, top, rng.uniform_int(2) == 0);
    return rng.uniform_int(2) == 0 ? bottom : top;
  }
  // Leaf: carve a room with at least one cell of margin inside the region.
  int max_w = std::max(3, r.w() - 2);
  int max_h = std::max(3, r.h() - 2);
  int rw = 3 + static_cast<int>(rng.uniform_int(std::max(1, max_w - 2)));
  int rh = 3 + static_cast<int>(rng.uniform_int(std::max(1, max_h - 2)));
  rw = std::min(rw, max_w);
  rh = std::min(rh, max_h);
  int rx = r.x0 + 1 + static_cast<int>(rng.uniform_int(std::max(1, r.w() - rw - 1)));
  int ry = r.y0 + 1 + static_cast<int>(rng.uniform_int(std::max(1, r.h() - rh - 1)));
  for (int y = ry; y < ry + rh; ++y)
    for (int x = rx; x < rx + rw; ++x) carve_cell(w, x, y);
  return Cell{rx + rw / 2, ry + rh / 2};
}

// 4-connected component labels over free cells; -1 on blocked cells.
std::vector<int> component_labels(const World& w, int& count) {
  std::vector<int> label(static_cast<std::size_t>(w.size) * w.size, -1);
  count = 0;
  for (int cy = 0; cy < w.size; ++cy) {
    for (int cx = 0; cx < w.size; ++cx) {
      std::size_t idx = static_cast<std::size_t>(cy) * w.size + cx;
      if (w.blocked[idx] || label[idx] >= 0) continue;
      std::vector<Cell> stack{{cx, cy}};
      label[idx] = count;
      while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        const int dx[4] = {1, -1, 0, 0};
        const int dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          Cell nb{c.cx + dx[k], c.cy + dy[k]};
          if (!w.in_bounds(nb) || w.is_blocked(nb)) continue;
          std::size_t nidx = static_cast<std::size_t>(nb.cy) * w.size + nb.cx;
          if (label[nidx] >= 0) continue;
          label[nidx] = count;
          stack.push_back(nb);
        }
      }
      ++count;
    }
  }
  return label;
}

void repair_connectivity(World& w, Rng& rng) {
  for (;;) {
    int count = 0;
    auto label = component_labels(w, count);
    if (count <= 1) return;
    // Carve between the closest pair of cells across components 0 and !=0.
    long best = std::numeric_limits<long>::max();
    Cell from{}, to{};
    for (int cy = 0; cy < w.size; ++cy) {
      for (int cx = 0; cx < w.size; ++cx) {
        std::size_t idx = static_cast<std::size_t>(cy) * w.size + cx;
        if (label[idx] != 0) continue;
        for (int oy = 0; oy < w.size; ++oy) {
          for (int ox = 0; ox < w.size; ++ox) {
            std::size_t oidx = static_cast<std::size_t>(oy) * w.size + ox;
            if (label[oidx] <= 0) continue;
            long d = std::labs(cx - ox) + std::labs(cy - oy);
            if (d < best) {
              best = d;
              from = {cx, cy};
              to = {ox, oy};
            }
          }
        }
      }
    }
    carve_corridor(w, from, to, rng.uniform_int(2) == 0);
  }
}

}  // namespace

int count_free_components(const World& w) {
  int count = 0;
  component_labels(w, count);
  return count;
}

World generate_world(std::uint64_t seed, const WorldParams& params, Split split) {
  if (params.size < 16) {
    throw ConfigError("world size must be at least 16 cells, got " +
                      std::to_string(params.size));
  }
  if (params.landmarks < 3) {
    throw ConfigError("landmark count must be at least 3");
  }
  if (params.landmarks > static_cast<int>(landmark_names().size())) {
    throw ConfigError("landmark count exceeds the name pool (" +
                      std::to_string(landmark_names().size()) + ")");
  }
  World w;
  w.seed = seed;
  w.params = params;
  w.split = split;
  w.size = params.size;
  w.blocked.assign(static_cast<std::size_t>(w.size) * w.size, 1);

  Rng rng(seed ^ 0x4e41565231ull);  // mixed so seed 0 is still usable
  partition(w, rng, {1, 1, w.size - 2, w.size - 2}, 0);
  repair_connectivity(w, rng);

  // Landmarks on distinct free cells, separated when possible.
  std::vector<Cell> free_cells;
  for (int cy = 0; cy < w.size; ++cy)
    for (int cx = 0; cx < w.size; ++cx)
      if (w.is_free({cx, cy})) free_cells.push_back({cx, cy});
  if (static_cast<int>(free_cells.size()) < params.landmarks) {
    throw ConfigError("not enough free cells for " +
                      std::to_string(params.landmarks) + " landmarks");
  }
  rng.shuffle(free_cells);
  std::vector<int> name_ids(landmark_names().size());
  for (std::size_t i = 0; i < name_ids.size(); ++i) name_ids[i] = static_cast<int>(i);
  rng.shuffle(name_ids);

  for (int sep = std::max(3, w.size / 6); sep >= 1 && w.landmarks.empty(); sep /= 2) {
    std::vector<Cell> picked;
    for (const Cell& c : free_cells) {
      bool ok = true;
      for (const Cell& p : picked) {
        if (std::max(std::abs(c.cx - p.cx), std::abs(c.cy - p.cy)) < sep) {
          ok = false;
          break;
        }
      }
      if (ok) picked.push_back(c);
      if (static_cast<int>(picked.size()) == params.landmarks) break;
    }
    if (static_cast<int>(picked.size()) == params.landmarks) {
      for (int i = 0; i < params.landmarks; ++i) {
        w.landmarks.push_back(Landmark{name_ids[i], picked[i]});
      }
    }
  }
  if (w.landmarks.empty()) {
    throw ConfigError("could not place " + std::to_string(params.landmarks) +
                      " landmarks on distinct free cells");
  }
  return w;
}

StepResult apply_action(const World& world, const Pose& pose, Action action) {
  StepResult r{pose, false, false};
  switch (action) {
    case Action::Forward: {
      double dx, dy;
      heading_dir(pose.heading, dx, dy);
      double nx = pose.x + kForwardStep * dx;
      double ny = pose.y + kForwardStep * dy;
      if (world.is_free(world.cell_at(nx, ny))) {
        r.pose.x = nx;
        r.pose.y = ny;
      } else {
        r.collided = true;
      }
      break;
    }
    case Action::TurnLeft:
      r.pose.heading = (pose.heading + kTurnDegrees) % 360;
      break;
    case Action::TurnRight:
      r.pose.heading = (pose.heading - kTurnDegrees + 360) % 360;
      break;
    case Action::Stop:
      r.stopped = true;
      break;
  }
  return r;
}

Frame render_frame(const World& world, const Pose& pose, int step) {
  Frame f;
  f.captured_at_step = step;
  Cell center = world.cell_at(pose.x, pose.y);
  double cx, cy;
  world.cell_center(center, cx, cy);
  double fx, fy;  // forward direction
  heading_dir(pose.heading, fx, fy);
  double rx = fy, ry = -fx;  // right-hand direction
  const int half = kFrameSize / 2;
  for (int row = 0; row < kFrameSize; ++row) {
    for (int col = 0; col < kFrameSize; ++col) {
      double up = static_cast<double>(half - row);
      double right = static_cast<double>(col - half);
      double px = cx + (right * rx + up * fx) * kCellSize;
      double py = cy + (right * ry + up * fy) * kCellSize;
      Cell c = world.cell_at(px, py);
      std::size_t i = static_cast<std::size_t>(row) * kFrameSize + col;
      f.occupancy[i] = world.is_blocked(c) ? 1 : 0;
      f.landmark[i] = static_cast<std::uint8_t>(world.landmark_at(c));
    }
  }
  return f;
}

std::vector<double> distance_field(const World& world, const Cell& source) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(world.size) * world.size, inf);
  if (world.is_blocked(source)) {
    throw ContractError("distance_field source on blocked cell");
  }
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  std::size_t sidx = static_cast<std::size_t>(source.cy) * world.size + source.cx;
  dist[sidx] = 0.0;
  pq.push({0.0, sidx});
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
        if (dx != 0 && dy != 0) {
          // No corner cutting: both orthogonal neighbors must be free.
          if (world.is_blocked({cx + dx, cy}) || world.is_blocked({cx, cy + dy})) {
            continue;
          }
        }
        double nd = d + ((dx != 0 && dy != 0) ? diag : kCellSize);
        std::size_t nidx = static_cast<std::size_t>(nb.cy) * world.size + nb.cx;
        if (nd < dist[nidx]) {
          dist[nidx] = nd;
          pq.push({nd, nidx});
        }
      }
    }
  }
  return dist;
}

double geodesic_distance(const World& world, double ax, double ay, double bx,
                         double by) {
  Cell ca = world.cell_at(ax, ay);
  Cell cb = world.cell_at(bx, by);
  if (world.is_blocked(ca) || world.is_blocked(cb)) {
    throw ContractError("geodesic_distance: position on blocked cell");
  }
  if (ca == cb) return std::hypot(bx - ax, by - ay);
  auto dist = distance_field(world, ca);
  return dist[static_cast<std::size_t>(cb.cy) * world.size + cb.cx];
}

std::string serialize_world(const World& w) {
  return std::string("NAVR1-WORLD v1|seed=") + std::to_string(w.seed) +
         "|size=" + std::to_string(w.params.size) +
         "|landmarks=" + std::to_string(w.params.landmarks) +
         "|split=" + split_name(w.split);
}

World deserialize_world(const std::string& line) {
  auto fields = split(line, '|');
  if (fields.empty() || fields[0] != "NAVR1-WORLD v1") {
    throw IoError("not a NAVR1-WORLD v1 record");
  }
  std::uint64_t seed = 0;
  WorldParams params;
  Split sp = Split::Train;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    auto kv = split(fields[i], '=');
    if (kv.size() != 2) throw IoError("bad world field: " + fields[i]);
    if (kv[0] == "seed") seed = std::stoull(kv[1]);
    else if (kv[0] == "size") params.size = std::stoi(kv[1]);
    else if (kv[0] == "landmarks") params.landmarks = std::stoi(kv[1]);
    else if (kv[0] == "split") sp = split_from_name(kv[1]);
    else throw IoError("unknown world field: " + kv[0]);
  }
  return generate_world(seed, params, sp);
}

std::string dump_grid(const World& w) {
  std::string out;
  for (int cy = w.size - 1; cy >= 0; --cy) {
    for (int cx = 0; cx < w.size; ++cx) {
      int lm = w.landmark_at({cx, cy});
      if (lm > 0) {
        out += static_cast<char>('a' + (lm - 1) % 26);
      } else {
        out += w.is_blocked({cx, cy}) ? '#' : '.';
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace navr1
