#include "navr1/vocab.hpp"

#include <unordered_map>

#include "navr1/util.hpp"

namespace navr1 {
namespace {

const std::vector<std::string>& base_tokens() {
  static const std::vector<std::string> toks = {
      "<pad>", "<sys>", "A",    "B",      "C",       "D",     "walk",
      "past",  "then",  "stop", "at",     "turn",    "left",  "right",
      "move",  "forward", "0.25", "meters", "30",    "degrees"};
  return toks;
}

}  // namespace

Vocabulary::Vocabulary() {
  tokens_ = base_tokens();
  system_id_ = 1;
  first_landmark_ = static_cast<int>(tokens_.size());
  for (const auto& name : landmark_names()) tokens_.push_back(name);
}

int Vocabulary::id(const std::string& token) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i] == token) return static_cast<int>(i);
  }
  throw ContractError("unknown token '" + token + "'");
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || id >= size()) {
    throw ContractError("token id " + std::to_string(id) + " out of range");
  }
  return tokens_[id];
}

bool Vocabulary::contains(const std::string& token) const {
  for (const auto& t : tokens_) {
    if (t == token) return true;
  }
  return false;
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& words) const {
  std::vector<int> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(id(w));
  return out;
}

std::vector<std::string> Vocabulary::decode(const std::vector<int>& ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(token(i));
  return out;
}

int Vocabulary::landmark_token_id(int name_id) const {
  if (name_id < 0 || name_id >= static_cast<int>(landmark_names().size())) {
    throw ContractError("landmark name id out of range");
  }
  return first_landmark_ + name_id;
}

std::string Vocabulary::serialize() const {
  std::string out = "NAVR1-VOCAB v1\n";
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out += std::to_string(i) + " " + tokens_[i] + "\n";
  }
  return out;
}

Vocabulary Vocabulary::deserialize(const std::string& text) {
  auto lines = split(text, '\n');
  if (lines.empty() || lines[0] != "NAVR1-VOCAB v1") {
    throw IoError("not a NAVR1-VOCAB v1 file");
  }
  Vocabulary v;
  int seen = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto parts = split(lines[i], ' ');
    if (parts.size() != 2) throw IoError("bad vocab line: " + lines[i]);
    int id = std::stoi(parts[0]);
    if (id != seen || id >= v.size() || v.tokens_[id] != parts[1]) {
      throw IoError("vocabulary file does not match this build at id " + parts[0]);
    }
    ++seen;
  }
  if (seen != v.size()) throw IoError("vocabulary file is incomplete");
  return v;
}

char OptionTable::identifier(Action a) {
  return static_cast<char>('A' + static_cast<int>(a));
}

Action OptionTable::action(char identifier) {
  if (identifier < 'A' || identifier > 'D') {
    throw ContractError(std::string("unknown option identifier '") + identifier + "'");
  }
  return static_cast<Action>(identifier - 'A');
}

const std::vector<std::string>& OptionTable::description_words(Action a) {
  static const std::vector<std::string> fwd = {"move", "forward", "0.25", "meters"};
  static const std::vector<std::string> left = {"turn", "left", "30", "degrees"};
  static const std::vector<std::string> right = {"turn", "right", "30", "degrees"};
  static const std::vector<std::string> stop = {"stop"};
  switch (a) {
    case Action::Forward: return fwd;
    case Action::TurnLeft: return left;
    case Action::TurnRight: return right;
    case Action::Stop: return stop;
  }
  throw ContractError("bad action");
}

std::vector<int> OptionTable::block_tokens(const Vocabulary& vocab, Action a) {
  std::vector<int> out{identifier_token(vocab, a)};
  for (const auto& w : description_words(a)) out.push_back(vocab.id(w));
  return out;
}

int OptionTable::identifier_token(const Vocabulary& vocab, Action a) {
  return vocab.id(std::string(1, identifier(a)));
}

std::vector<std::size_t> OptionTable::identifier_token_ids(const Vocabulary& vocab) {
  std::vector<std::size_t> ids;
  for (int i = 0; i < 4; ++i) {
    ids.push_back(static_cast<std::size_t>(
        identifier_token(vocab, static_cast<Action>(i))));
  }
  return ids;
}

}  // namespace navr1
