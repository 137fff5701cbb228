#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace navr1 {

enum class Action : std::uint8_t { Forward = 0, TurnLeft = 1, TurnRight = 2, Stop = 3 };

constexpr double kCellSize = 0.25;     // meters per grid cell
constexpr double kForwardStep = 0.25;  // meters per FORWARD
constexpr int kTurnDegrees = 30;
constexpr int kFrameSize = 11;  // ego raster is kFrameSize x kFrameSize

const char* action_name(Action a);

// Heading in degrees, multiples of 30, 0 = +y, counterclockwise positive.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  int heading = 0;
};

// Unit direction for a heading.
void heading_dir(int heading, double& dx, double& dy);

struct Cell {
  int cx = 0;
  int cy = 0;
  bool operator==(const Cell&) const = default;
};

enum class Split { Train, ValSeen, ValUnseen };
const char* split_name(Split s);
Split split_from_name(const std::string& name);

struct WorldParams {
  int size = 48;       // grid side, cells
  int landmarks = 8;   // landmark count
  bool operator==(const WorldParams&) const = default;
};

struct Landmark {
  int name_id = 0;  // index into the landmark name pool, 1-based in frames
  Cell cell;
};

// Continuous plane over an occupancy grid. Immutable after generation.
struct World {
  std::uint64_t seed = 0;
  WorldParams params;
  Split split = Split::Train;
  int size = 0;
  std::vector<std::uint8_t> blocked;  // size*size, row-major by cy
  std::vector<Landmark> landmarks;

  bool in_bounds(const Cell& c) const {
    return c.cx >= 0 && c.cy >= 0 && c.cx < size && c.cy < size;
  }
  bool is_blocked(const Cell& c) const {
    if (!in_bounds(c)) return true;
    return blocked[static_cast<std::size_t>(c.cy) * size + c.cx] != 0;
  }
  bool is_free(const Cell& c) const { return !is_blocked(c); }
  Cell cell_at(double x, double y) const;
  // Center of a cell in meters.
  void cell_center(const Cell& c, double& x, double& y) const;
  // Landmark name-pool id at a cell, 0 if none.
  int landmark_at(const Cell& c) const;
};

// 11x11 ego-aligned raster. Channel 0 occupancy in {0,1}; channel 1 landmark
// name id (0 = none). Row 0 is farthest ahead, the center cell is the agent.
struct Frame {
  std::array<std::uint8_t, kFrameSize * kFrameSize> occupancy{};
  std::array<std::uint8_t, kFrameSize * kFrameSize> landmark{};
  int captured_at_step = 0;

  bool operator==(const Frame&) const = default;
};

// Landmark name pool shared by worlds, instructions and frames. Entry 0 of
// frame channel 1 means "none"; name id i maps to channel value i + 1.
const std::vector<std::string>& landmark_names();

// Deterministic room-and-corridor world. Free space is one connected
// component; landmarks sit on distinct free cells with distinct names.
// Throws ConfigError when the parameters cannot be satisfied.
World generate_world(std::uint64_t seed, const WorldParams& params, Split split);

struct StepResult {
  Pose pose;
  bool collided = false;
  bool stopped = false;
};

// FORWARD moves 0.25 m along the heading if the destination cell is free
// (otherwise the pose is unchanged and collided is set); turns add/subtract
// 30 degrees; STOP only sets the flag.
StepResult apply_action(const World& world, const Pose& pose, Action action);

// Ego raster centered at the agent cell with "up" along the heading.
// Cells outside the grid render blocked.
Frame render_frame(const World& world, const Pose& pose, int step);

// Shortest-path distance in meters over 8-connected free cells (straight
// cost = cell size, diagonal = sqrt(2) * cell size; diagonals must not cut
// corners). Positions snap to their containing cells; two positions in the
// same cell measure their Euclidean distance. +inf when disconnected.
// Throws ContractError when either position is on a blocked cell.
double geodesic_distance(const World& world, double ax, double ay, double bx,
                         double by);

// Distance field from a source cell to every free cell, in meters
// (+inf where unreachable). Row-major by cy, same layout as World::blocked.
std::vector<double> distance_field(const World& world, const Cell& source);

// Free cells reachable from the first free cell; used by generation repair
// and the connectivity tests.
int count_free_components(const World& world);

// One-line versioned record (seed + params + split); worlds regenerate
// deterministically from it.
std::string serialize_world(const World& world);
World deserialize_world(const std::string& line);

// Full-grid text dump for debugging ('#' blocked, '.' free, letters mark
// landmarks).
std::string dump_grid(const World& world);

}  // namespace navr1
