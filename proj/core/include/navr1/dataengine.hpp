#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "navr1/memory.hpp"
#include "navr1/oracle.hpp"
#include "navr1/vocab.hpp"
#include "navr1/world.hpp"

namespace navr1 {

// One training example: prompt (instruction + sampled history + current
// frame) plus the next-n expert actions. Pose and goal are carried for
// replay checks and debugging only; the policy never sees them.
struct SampleRecord {
  std::string record_id;
  std::uint64_t world_seed = 0;
  WorldParams world_params;
  Split split = Split::Train;
  int t = 0;
  int n = 6;
  std::vector<int> instruction;       // token ids
  std::vector<int> history_indices;   // strictly increasing, all < t
  std::vector<Frame> history_frames;  // aligned with history_indices
  Frame current_frame;
  std::vector<Action> ground_truth;   // exactly n entries
  Pose pose;
  Cell goal;
};

// Template instruction over landmarks within 2 cells of the path:
// "walk past <L1> then ... then stop at <Lg>", or "stop at <Lg>" when no
// intermediate landmark is passed. Returns nullopt when no landmark lies
// within 2 cells of the goal (callers resample the episode).
std::optional<std::vector<int>> make_instruction(const World& world,
                                                 const ExpertPath& path,
                                                 const Vocabulary& vocab);

// One record per timestep of the episode. Ground truth comes from
// expert_next_actions (STOP-padded past the end); history indices from
// select_history under the budget cap.
std::vector<SampleRecord> emit_samples(const Episode& episode, int n,
                                       const MemoryConfig& memory,
                                       const Vocabulary& vocab);

// Text codecs; formats are pinned in docs/FORMATS.md.
std::string rle_encode(const std::uint8_t* values, std::size_t count);
std::vector<std::uint8_t> rle_decode(const std::string& text, std::size_t expect);
std::string serialize_record(const SampleRecord& rec, const Vocabulary& vocab);
SampleRecord parse_record(const std::string& line, const Vocabulary& vocab);

// Episode fixture used by closed-loop evaluation.
struct EvalEpisode {
  std::uint64_t world_seed = 0;
  WorldParams world_params;
  Split split = Split::Train;
  Pose start;
  Cell goal;
  std::vector<int> instruction;
  int expert_steps = 0;
  double shortest_length = 0.0;
};

std::string serialize_episode(const EvalEpisode& ep, const Vocabulary& vocab);
EvalEpisode parse_episode(const std::string& line, const Vocabulary& vocab);

struct DataGenConfig {
  std::uint64_t seed0 = 1;
  int worlds = 200;
  WorldParams world_params;
  int episodes_per_world = 2;
  int n = 6;
  MemoryConfig memory;
  double min_goal_dist = 5.0;  // meters, geodesic
  double max_goal_dist = 9.0;
  int max_attempts = 60;  // per episode before giving up

  void validate() const;
};

// Worlds are assigned to splits by index: first 61% train, next 11%
// val-seen, rest val-unseen.
Split split_for_index(int index, int total);

struct DatasetSummary {
  long records_train = 0;
  long records_val_seen = 0;
  long records_val_unseen = 0;
  long episodes_train = 0;
  long episodes_val_seen = 0;
  long episodes_val_unseen = 0;
  long rejected_episodes = 0;
};

// Writes {split}.records, {split}.episodes, vocab.txt and manifest.txt into
// out_dir. Generation is parallel across worlds with per-world RNG streams;
// output order is fixed so rebuilds are byte-identical. On failure partial
// output is removed.
DatasetSummary build_dataset(const DataGenConfig& cfg, const std::string& out_dir,
                             const std::string& config_hash);

std::vector<SampleRecord> load_records(const std::string& path, const Vocabulary& vocab);
std::vector<EvalEpisode> load_episodes(const std::string& path, const Vocabulary& vocab);

}  // namespace navr1
