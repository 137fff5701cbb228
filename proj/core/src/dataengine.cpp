#include "navr1/dataengine.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include "navr1/rng.hpp"
#include "navr1/util.hpp"

namespace navr1 {
namespace {

constexpr int kLandmarkRange = 2;       // cells; "within 2 cells of the path"
constexpr int kMaxIntermediates = 6;
constexpr const char* kGeneratorVersion = "1";

int chebyshev(const Cell& a, const Cell& b) {
  return std::max(std::abs(a.cx - b.cx), std::abs(a.cy - b.cy));
}

std::string frame_text(const Frame& f) {
  return rle_encode(f.occupancy.data(), f.occupancy.size()) + ";" +
         rle_encode(f.landmark.data(), f.landmark.size());
}

Frame frame_from_text(const std::string& text, int step) {
  auto parts = split(text, ';');
  if (parts.size() != 2) throw IoError("bad frame encoding: " + text);
  Frame f;
  auto occ = rle_decode(parts[0], f.occupancy.size());
  auto lmk = rle_decode(parts[1], f.landmark.size());
  std::copy(occ.begin(), occ.end(), f.occupancy.begin());
  std::copy(lmk.begin(), lmk.end(), f.landmark.begin());
  f.captured_at_step = step;
  return f;
}

}  // namespace

std::optional<std::vector<int>> make_instruction(const World& world,
                                                 const ExpertPath& path,
                                                 const Vocabulary& vocab) {
  if (path.waypoints.empty()) throw ContractError("make_instruction: empty path");
  const Cell goal = path.waypoints.back();

  // Goal landmark: nearest to the goal cell, ties by name id.
  int goal_lm = -1;
  int goal_d = kLandmarkRange + 1;
  for (const auto& lm : world.landmarks) {
    int d = chebyshev(lm.cell, goal);
    if (d < goal_d || (d == goal_d && goal_lm >= 0 && lm.name_id < goal_lm)) {
      goal_d = d;
      goal_lm = lm.name_id;
    }
  }
  if (goal_lm < 0 || goal_d > kLandmarkRange) return std::nullopt;

  // Landmarks passed along the path, ordered by first waypoint in range.
  std::vector<int> passed;
  for (const auto& wp : path.waypoints) {
    for (const auto& lm : world.landmarks) {
      if (lm.name_id == goal_lm) continue;
      if (chebyshev(lm.cell, wp) > kLandmarkRange) continue;
      if (std::find(passed.begin(), passed.end(), lm.name_id) == passed.end()) {
        passed.push_back(lm.name_id);
      }
    }
  }
  if (static_cast<int>(passed.size()) > kMaxIntermediates) {
    passed.resize(kMaxIntermediates);
  }

  std::vector<std::string> words;
  if (!passed.empty()) {
    words.push_back("walk");
    words.push_back("past");
    words.push_back(landmark_names()[passed[0]]);
    for (std::size_t i = 1; i < passed.size(); ++i) {
      words.push_back("then");
      words.push_back(landmark_names()[passed[i]]);
    }
    words.push_back("then");
  }
  words.push_back("stop");
  words.push_back("at");
  words.push_back(landmark_names()[goal_lm]);
  return vocab.encode(words);
}

std::vector<SampleRecord> emit_samples(const Episode& ep, int n,
                                       const MemoryConfig& memory,
                                       const Vocabulary& vocab) {
  ExpertPath path = shortest_path(
      ep.world, ep.world.cell_at(ep.start.x, ep.start.y), ep.goal);
  auto instruction = make_instruction(ep.world, path, vocab);
  if (!instruction) {
    throw ContractError("emit_samples: episode has no landmark near its goal");
  }
  std::vector<SampleRecord> out;
  out.reserve(ep.actions.size());
  for (int t = 0; t < static_cast<int>(ep.actions.size()); ++t) {
    SampleRecord rec;
    rec.world_seed = ep.world.seed;
    rec.world_params = ep.world.params;
    rec.split = ep.world.split;
    rec.t = t;
    rec.n = n;
    rec.instruction = *instruction;
    rec.history_indices = apply_budget(select_history(t, memory), memory.budget);
    for (int idx : rec.history_indices) rec.history_frames.push_back(ep.frames[idx]);
    rec.current_frame = ep.frames[t];
    rec.ground_truth = expert_next_actions(ep.world, ep.poses[t], ep.goal, n);
    rec.pose = ep.poses[t];
    rec.goal = ep.goal;
    out.push_back(std::move(rec));
  }
  return out;
}

std::string rle_encode(const std::uint8_t* values, std::size_t count) {
  std::string out;
  std::size_t i = 0;
  while (i < count) {
    std::size_t j = i;
    while (j < count && values[j] == values[i]) ++j;
    if (!out.empty()) out += ',';
    out += std::to_string(static_cast<int>(values[i])) + "*" + std::to_string(j - i);
    i = j;
  }
  return out;
}

std::vector<std::uint8_t> rle_decode(const std::string& text, std::size_t expect) {
  std::vector<std::uint8_t> out;
  out.reserve(expect);
  for (const auto& run : split(text, ',')) {
    auto parts = split(run, '*');
    if (parts.size() != 2) throw IoError("bad RLE run: " + run);
    int value = std::stoi(parts[0]);
    long count = std::stol(parts[1]);
    if (value < 0 || value > 255 || count < 1) throw IoError("bad RLE run: " + run);
    out.insert(out.end(), static_cast<std::size_t>(count),
               static_cast<std::uint8_t>(value));
  }
  if (out.size() != expect) {
    throw IoError("RLE length " + std::to_string(out.size()) + ", expected " +
                  std::to_string(expect));
  }
  return out;
}

std::string serialize_record(const SampleRecord& rec, const Vocabulary& vocab) {
  std::string line = "id=" + rec.record_id;
  line += "|seed=" + std::to_string(rec.world_seed);
  line += "|wsize=" + std::to_string(rec.world_params.size);
  line += "|wlandmarks=" + std::to_string(rec.world_params.landmarks);
  line += "|split=" + std::string(split_name(rec.split));
  line += "|t=" + std::to_string(rec.t);
  line += "|n=" + std::to_string(rec.n);
  line += "|instr=" + join(vocab.decode(rec.instruction), " ");
  std::vector<std::string> hist;
  for (int h : rec.history_indices) hist.push_back(std::to_string(h));
  line += "|history=" + join(hist, ",");
  std::vector<std::string> frames;
  for (const auto& f : rec.history_frames) frames.push_back(frame_text(f));
  line += "|hframes=" + join(frames, "/");
  line += "|frame=" + frame_text(rec.current_frame);
  line += "|choices=ABCD";
  std::vector<std::string> gt;
  for (Action a : rec.ground_truth) gt.push_back(std::string(1, OptionTable::identifier(a)));
  line += "|gt=" + join(gt, ",");
  line += "|pose=" + fmt_double(rec.pose.x) + "," + fmt_double(rec.pose.y) + "," +
          std::to_string(rec.pose.heading);
  line += "|goal=" + std::to_string(rec.goal.cx) + "," + std::to_string(rec.goal.cy);
  return line;
}

SampleRecord parse_record(const std::string& line, const Vocabulary& vocab) {
  SampleRecord rec;
  std::map<std::string, std::string> kv;
  for (const auto& field : split(line, '|')) {
    auto eq = field.find('=');
    if (eq == std::string::npos) throw IoError("bad record field: " + field);
    kv[field.substr(0, eq)] = field.substr(eq + 1);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw IoError("record missing field '" + key + "'");
    return it->second;
  };
  rec.record_id = need("id");
  rec.world_seed = std::stoull(need("seed"));
  rec.world_params.size = std::stoi(need("wsize"));
  rec.world_params.landmarks = std::stoi(need("wlandmarks"));
  rec.split = split_from_name(need("split"));
  rec.t = std::stoi(need("t"));
  rec.n = std::stoi(need("n"));
  std::vector<std::string> instr_words;
  for (const auto& w : split(need("instr"), ' ')) {
    if (!w.empty()) instr_words.push_back(w);
  }
  rec.instruction = vocab.encode(instr_words);
  if (!need("history").empty()) {
    for (const auto& h : split(need("history"), ',')) {
      rec.history_indices.push_back(std::stoi(h));
    }
  }
  if (!need("hframes").empty()) {
    auto frames = split(need("hframes"), '/');
    if (frames.size() != rec.history_indices.size()) {
      throw IoError("record history frame count mismatch");
    }
    for (std::size_t i = 0; i < frames.size(); ++i) {
      rec.history_frames.push_back(frame_from_text(frames[i], rec.history_indices[i]));
    }
  } else if (!rec.history_indices.empty()) {
    throw IoError("record history frame count mismatch");
  }
  rec.current_frame = frame_from_text(need("frame"), rec.t);
  if (need("choices") != "ABCD") throw IoError("unknown option table version");
  for (const auto& g : split(need("gt"), ',')) {
    if (g.size() != 1) throw IoError("bad ground-truth entry: " + g);
    rec.ground_truth.push_back(OptionTable::action(g[0]));
  }
  if (static_cast<int>(rec.ground_truth.size()) != rec.n) {
    throw IoError("record ground truth length does not match n");
  }
  auto pose_parts = split(need("pose"), ',');
  if (pose_parts.size() != 3) throw IoError("bad pose field");
  rec.pose.x = std::stod(pose_parts[0]);
  rec.pose.y = std::stod(pose_parts[1]);
  rec.pose.heading = std::stoi(pose_parts[2]);
  auto goal_parts = split(need("goal"), ',');
  if (goal_parts.size() != 2) throw IoError("bad goal field");
  rec.goal.cx = std::stoi(goal_parts[0]);
  rec.goal.cy = std::stoi(goal_parts[1]);

  // SampleRecord invariants, checked on every load.
  for (std::size_t i = 0; i < rec.history_indices.size(); ++i) {
    if (rec.history_indices[i] >= rec.t ||
        (i > 0 && rec.history_indices[i] <= rec.history_indices[i - 1])) {
      throw IoError("record history indices not strictly increasing below t");
    }
  }
  return rec;
}

std::string serialize_episode(const EvalEpisode& ep, const Vocabulary& vocab) {
  std::string line = "seed=" + std::to_string(ep.world_seed);
  line += "|wsize=" + std::to_string(ep.world_params.size);
  line += "|wlandmarks=" + std::to_string(ep.world_params.landmarks);
  line += "|split=" + std::string(split_name(ep.split));
  line += "|start=" + fmt_double(ep.start.x) + "," + fmt_double(ep.start.y) + "," +
          std::to_string(ep.start.heading);
  line += "|goal=" + std::to_string(ep.goal.cx) + "," + std::to_string(ep.goal.cy);
  line += "|instr=" + join(vocab.decode(ep.instruction), " ");
  line += "|steps=" + std::to_string(ep.expert_steps);
  line += "|lstar=" + fmt_double(ep.shortest_length);
  return line;
}

EvalEpisode parse_episode(const std::string& line, const Vocabulary& vocab) {
  EvalEpisode ep;
  std::map<std::string, std::string> kv;
  for (const auto& field : split(line, '|')) {
    auto eq = field.find('=');
    if (eq == std::string::npos) throw IoError("bad episode field: " + field);
    kv[field.substr(0, eq)] = field.substr(eq + 1);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw IoError("episode missing field '" + key + "'");
    return it->second;
  };
  ep.world_seed = std::stoull(need("seed"));
  ep.world_params.size = std::stoi(need("wsize"));
  ep.world_params.landmarks = std::stoi(need("wlandmarks"));
  ep.split = split_from_name(need("split"));
  auto start = split(need("start"), ',');
  if (start.size() != 3) throw IoError("bad start field");
  ep.start.x = std::stod(start[0]);
  ep.start.y = std::stod(start[1]);
  ep.start.heading = std::stoi(start[2]);
  auto goal = split(need("goal"), ',');
  if (goal.size() != 2) throw IoError("bad goal field");
  ep.goal.cx = std::stoi(goal[0]);
  ep.goal.cy = std::stoi(goal[1]);
  std::vector<std::string> instr_words;
  for (const auto& w : split(need("instr"), ' ')) {
    if (!w.empty()) instr_words.push_back(w);
  }
  ep.instruction = vocab.encode(instr_words);
  ep.expert_steps = std::stoi(need("steps"));
  ep.shortest_length = std::stod(need("lstar"));
  return ep;
}

void DataGenConfig::validate() const {
  if (worlds < 1) throw ConfigError("gen.worlds must be >= 1");
  if (episodes_per_world < 1) throw ConfigError("gen.episodes-per-world must be >= 1");
  if (n < 1) throw ConfigError("data.n must be >= 1");
  if (min_goal_dist <= kSuccessThreshold) {
    throw ConfigError("gen.min-goal-dist must exceed the success threshold");
  }
  if (max_goal_dist < min_goal_dist) {
    throw ConfigError("gen.max-goal-dist must be >= gen.min-goal-dist");
  }
  memory.validate();
}

Split split_for_index(int index, int total) {
  int train_end = static_cast<int>(std::ceil(total * 0.61));
  int seen_end = train_end + static_cast<int>(std::ceil(total * 0.11));
  if (index < train_end) return Split::Train;
  if (index < seen_end && index < total) return Split::ValSeen;
  return Split::ValUnseen;
}

namespace {

struct WorldOutput {
  std::vector<std::string> record_lines;
  std::vector<std::string> episode_lines;
  long rejected = 0;
  Split split = Split::Train;
};

WorldOutput generate_world_samples(const DataGenConfig& cfg, int world_index,
                                   const Vocabulary& vocab) {
  WorldOutput out;
  out.split = split_for_index(world_index, cfg.worlds);
  std::uint64_t seed = cfg.seed0 + static_cast<std::uint64_t>(world_index);
  World world = generate_world(seed, cfg.world_params, out.split);
  Rng world_rng = Rng(cfg.seed0).fork(0x657069736f646573ull, seed);

  std::vector<Cell> free_cells;
  for (int cy = 0; cy < world.size; ++cy)
    for (int cx = 0; cx < world.size; ++cx)
      if (world.is_free({cx, cy})) free_cells.push_back({cx, cy});

  for (int e = 0; e < cfg.episodes_per_world; ++e) {
    Rng rng = world_rng.fork(static_cast<std::uint64_t>(e));
    bool built = false;
    for (int attempt = 0; attempt < cfg.max_attempts && !built; ++attempt) {
      const Landmark& lm = world.landmarks[rng.uniform_int(world.landmarks.size())];
      Cell goal = lm.cell;
      Cell start_cell = free_cells[rng.uniform_int(free_cells.size())];
      int heading = static_cast<int>(rng.uniform_int(12)) * kTurnDegrees;
      if (start_cell == goal) {
        ++out.rejected;
        continue;
      }
      double sx, sy;
      world.cell_center(start_cell, sx, sy);
      double gx, gy;
      world.cell_center(goal, gx, gy);
      double dist = geodesic_distance(world, sx, sy, gx, gy);
      if (dist < cfg.min_goal_dist || dist > cfg.max_goal_dist) {
        ++out.rejected;
        continue;
      }
      Pose start{sx, sy, heading};
      auto episode = build_episode(world, start, goal);
      if (!episode) {
        ++out.rejected;
        continue;
      }
      ExpertPath path = shortest_path(world, start_cell, goal);
      auto instruction = make_instruction(world, path, vocab);
      if (!instruction) {
        ++out.rejected;
        continue;
      }
      auto records = emit_samples(*episode, cfg.n, cfg.memory, vocab);
      for (auto& rec : records) {
        rec.record_id = std::string(split_name(out.split)) + "-w" +
                        std::to_string(seed) + "-e" + std::to_string(e) + "-t" +
                        std::to_string(rec.t);
        out.record_lines.push_back(serialize_record(rec, vocab));
      }
      EvalEpisode ev;
      ev.world_seed = seed;
      ev.world_params = cfg.world_params;
      ev.split = out.split;
      ev.start = start;
      ev.goal = goal;
      ev.instruction = *instruction;
      ev.expert_steps = static_cast<int>(episode->actions.size());
      ev.shortest_length = episode->shortest_length;
      out.episode_lines.push_back(serialize_episode(ev, vocab));
      built = true;
    }
  }
  return out;
}

}  // namespace

DatasetSummary build_dataset(const DataGenConfig& cfg, const std::string& out_dir,
                             const std::string& config_hash) {
  cfg.validate();
  make_dirs(out_dir);
  Vocabulary vocab;

  std::vector<WorldOutput> outputs(cfg.worlds);
  parallel_for(cfg.worlds, [&](std::size_t i) {
    outputs[i] = generate_world_samples(cfg, static_cast<int>(i), vocab);
  });

  DatasetSummary summary;
  std::string records[3], episodes[3];
  for (const auto& wo : outputs) {
    int s = static_cast<int>(wo.split);
    for (const auto& line : wo.record_lines) records[s] += line + "\n";
    for (const auto& line : wo.episode_lines) episodes[s] += line + "\n";
    summary.rejected_episodes += wo.rejected;
  }
  summary.records_train = std::count(records[0].begin(), records[0].end(), '\n');
  summary.records_val_seen = std::count(records[1].begin(), records[1].end(), '\n');
  summary.records_val_unseen = std::count(records[2].begin(), records[2].end(), '\n');
  summary.episodes_train = std::count(episodes[0].begin(), episodes[0].end(), '\n');
  summary.episodes_val_seen = std::count(episodes[1].begin(), episodes[1].end(), '\n');
  summary.episodes_val_unseen = std::count(episodes[2].begin(), episodes[2].end(), '\n');

  std::vector<std::string> written;
  try {
    for (int s = 0; s < 3; ++s) {
      std::string split_tag = split_name(static_cast<Split>(s));
      std::string rp = out_dir + "/" + split_tag + ".records";
      std::string epath = out_dir + "/" + split_tag + ".episodes";
      write_file(rp, records[s]);
      written.push_back(rp);
      write_file(epath, episodes[s]);
      written.push_back(epath);
    }
    std::string vpath = out_dir + "/vocab.txt";
    write_file(vpath, vocab.serialize());
    written.push_back(vpath);

    std::string manifest;
    manifest += "manifest-version=1\n";
    manifest += std::string("generator-version=") + kGeneratorVersion + "\n";
    manifest += "config-hash=" + config_hash + "\n";
    manifest += "worlds=" + std::to_string(cfg.worlds) + "\n";
    manifest += "n=" + std::to_string(cfg.n) + "\n";
    manifest += "records.train=" + std::to_string(summary.records_train) + "\n";
    manifest += "records.val-seen=" + std::to_string(summary.records_val_seen) + "\n";
    manifest += "records.val-unseen=" + std::to_string(summary.records_val_unseen) + "\n";
    manifest += "episodes.train=" + std::to_string(summary.episodes_train) + "\n";
    manifest += "episodes.val-seen=" + std::to_string(summary.episodes_val_seen) + "\n";
    manifest +=
        "episodes.val-unseen=" + std::to_string(summary.episodes_val_unseen) + "\n";
    manifest += "rejected-episodes=" + std::to_string(summary.rejected_episodes) + "\n";
    std::string mpath = out_dir + "/manifest.txt";
    write_file(mpath, manifest);
    written.push_back(mpath);
  } catch (...) {
    for (const auto& p : written) std::filesystem::remove(p);
    throw;
  }
  return summary;
}

std::vector<SampleRecord> load_records(const std::string& path,
                                       const Vocabulary& vocab) {
  std::vector<SampleRecord> out;
  for (const auto& line : split(read_file(path), '\n')) {
    if (trim(line).empty()) continue;
    out.push_back(parse_record(line, vocab));
  }
  return out;
}

std::vector<EvalEpisode> load_episodes(const std::string& path,
                                       const Vocabulary& vocab) {
  std::vector<EvalEpisode> out;
  for (const auto& line : split(read_file(path), '\n')) {
    if (trim(line).empty()) continue;
    out.push_back(parse_episode(line, vocab));
  }
  return out;
}

}  // namespace navr1
