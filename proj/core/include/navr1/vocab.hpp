#pragma once

#include <string>
#include <vector>

#include "navr1/world.hpp"

namespace navr1 {

// Fixed token table shared by the data engine and the policy. The id
// assignment is part of the dataset format; it is persisted alongside
// checkpoints as a versioned "NAVR1-VOCAB v1" file.
class Vocabulary {
 public:
  Vocabulary();

  int id(const std::string& token) const;          // throws on unknown token
  const std::string& token(int id) const;          // throws on out-of-range id
  bool contains(const std::string& token) const;
  int size() const { return static_cast<int>(tokens_.size()); }

  std::vector<int> encode(const std::vector<std::string>& words) const;
  std::vector<std::string> decode(const std::vector<int>& ids) const;

  int system_id() const { return system_id_; }
  int landmark_token_id(int name_id) const;  // name pool index -> token id

  std::string serialize() const;
  // Loads and checks an existing table against this build's table.
  static Vocabulary deserialize(const std::string& text);

 private:
  std::vector<std::string> tokens_;
  int system_id_ = 0;
  int first_landmark_ = 0;
};

// The four option identifiers and their fixed action descriptions
// (A "move forward 0.25 meters", B "turn left 30 degrees",
//  C "turn right 30 degrees", D "stop").
struct OptionTable {
  // 'A' + index ordering matches the Action enum.
  static char identifier(Action a);
  static Action action(char identifier);  // throws on unknown identifier
  static const std::vector<std::string>& description_words(Action a);

  // Token layout of one decoded action block: identifier token followed by
  // the description tokens.
  static std::vector<int> block_tokens(const Vocabulary& vocab, Action a);
  static int identifier_token(const Vocabulary& vocab, Action a);
  // The four identifier token ids, in A..D order.
  static std::vector<std::size_t> identifier_token_ids(const Vocabulary& vocab);
};

}  // namespace navr1
