#pragma once

#include <optional>
#include <vector>

#include "navr1/world.hpp"

namespace navr1 {

constexpr double kSuccessThreshold = 3.0;  // meters, shared with evaluation
constexpr int kEpisodeCap = 200;           // expert roll-out step limit

// 8-adjacent free-cell path; total length is the sum of step costs.
struct ExpertPath {
  std::vector<Cell> waypoints;
  double total_length = 0.0;
};

// Cost-minimal 8-connected path (same costs and corner rule as
// geodesic_distance). Ties break by fixed (dy, dx) expansion order.
ExpertPath shortest_path(const World& world, const Cell& start, const Cell& goal);

// Greedy shortest-path follower simulated n steps ahead from `pose`:
// STOP (and pad with STOP) once within the success threshold, turn 30
// degrees while more than 15 degrees off the bearing to the next waypoint
// (ties turn left), otherwise FORWARD. A FORWARD that would collide turns
// instead so the simulated pose always progresses.
std::vector<Action> expert_next_actions(const World& world, const Pose& pose,
                                        const Cell& goal, int n);

// Full expert roll-out with per-step observations.
struct Episode {
  World world;  // regenerable copy kept for convenience
  Pose start;
  Cell goal;
  std::vector<Action> actions;  // ends with Stop
  std::vector<Pose> poses;      // poses[t] is the pose before actions[t]
  std::vector<Frame> frames;    // frames[t] rendered at poses[t]
  double shortest_length = 0.0; // start-to-goal geodesic, meters
};

// Rolls the follower to STOP. Returns nullopt when the step cap is hit
// (callers resample and report the rejection rate).
std::optional<Episode> build_episode(const World& world, const Pose& start,
                                     const Cell& goal);

}  // namespace navr1
