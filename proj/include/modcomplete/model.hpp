#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modcomplete/common.hpp"

namespace modcomplete {

struct Signal {
  std::string name;
  std::optional<std::string> display;

  bool operator==(const Signal&) const = default;
};

struct SendEffect {
  std::string signal;
  std::string target_block;

  auto operator<=>(const SendEffect&) const = default;
};

struct Transition {
  std::string id;
  std::string source;
  std::string target;
  std::optional<std::string> trigger;
  std::optional<std::string> guard;
  std::vector<SendEffect> effects;
  std::vector<std::string> provenance;

  bool operator==(const Transition&) const = default;
};

struct State {
  std::string name;

  bool operator==(const State&) const = default;
};

struct StateMachine {
  std::string owner;
  std::vector<State> states;
  std::vector<Transition> transitions;
  std::optional<std::string> initial;

  bool has_state(std::string_view name) const;

  bool operator==(const StateMachine&) const = default;
};

struct Block {
  std::string name;
  std::vector<std::string> parts;
  std::optional<StateMachine> state_machine;
  std::vector<std::string> receivable_signals;

  bool operator==(const Block&) const = default;
};

struct SystemModel {
  std::string version = "1";
  std::string name;
  std::vector<Block> blocks;
  std::vector<Signal> signals;

  const Block* find_block(std::string_view name) const;
  Block* find_block(std::string_view name);
  const Signal* find_signal(std::string_view name) const;
  std::size_t transition_count() const;

  bool operator==(const SystemModel&) const = default;
};

// Malformed document: bad JSON, wrong types, unknown or missing keys.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error("SchemaError", path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Well-formed document that breaks a model invariant.
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& message)
      : Error("ValidationError", path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class MergeError : public Error {
 public:
  enum class Kind { UnknownOwner, UnknownState, UnknownSignal, UnknownBlock };

  MergeError(Kind kind, const std::string& message);
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// Stable content hash of a transition: (owner, source, target, trigger, effects).
std::string transition_id(std::string_view owner, const Transition& t);

// Sorts every list into canonical order (names, transition ids), sorts and
// dedups effects and provenance, and (re)computes transition ids.
void canonicalize(SystemModel& model);

// Throws ValidationError at the first violated invariant.
void validate_model(const SystemModel& model);

SystemModel load_model(std::string_view text);
std::string save_model(const SystemModel& model);

enum class MergeOutcome { Added, Duplicate, Conflict };
std::string_view to_string(MergeOutcome o);

struct MergeResult {
  MergeOutcome outcome;
  SystemModel model;
  // Id of the added transition, the duplicate it merged into, or the
  // existing transition it conflicts with.
  std::string transition_id;
};

// Value-semantics merge: `model` is untouched, the returned model carries the
// change. Duplicate unions provenance; Conflict leaves the model unchanged.
MergeResult add_transition(const SystemModel& model, std::string_view owner, Transition t);

// Element names of `metaclass` matching `phrase`, sorted lexicographically.
// State lookups with a scope search only that block's machine.
std::vector<std::string> lookup_elements(const SystemModel& model,
                                         std::span<const std::string> phrase,
                                         Metaclass metaclass,
                                         std::optional<std::string_view> scope = std::nullopt);

}  // namespace modcomplete
