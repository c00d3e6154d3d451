#include "modcomplete/model.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>

#include "json.hpp"
#include "modcomplete/normalize.hpp"

namespace modcomplete {

using nlohmann::json;

namespace {

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  });
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// ---- document reading -------------------------------------------------------

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw SchemaError(path, "unknown key '" + key + "'");
    }
  }
}

std::string get_string(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path, std::string("missing key '") + key + "'");
  if (!it->is_string()) throw SchemaError(path + "." + key, "expected a string");
  return it->get<std::string>();
}

std::optional<std::string> get_opt_string(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw SchemaError(path + "." + key, "expected a string");
  return it->get<std::string>();
}

const json* get_array(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return nullptr;
  if (!it->is_array()) throw SchemaError(path + "." + key, "expected an array");
  return &*it;
}

std::vector<std::string> get_string_list(const json& obj, const std::string& path, const char* key) {
  std::vector<std::string> out;
  const json* arr = get_array(obj, path, key);
  if (!arr) return out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const auto& item = (*arr)[i];
    if (!item.is_string()) {
      throw SchemaError(path + "." + key + "[" + std::to_string(i) + "]", "expected a string");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

Transition read_transition(const json& j, const std::string& path) {
  check_keys(j, path, {"id", "source", "target", "trigger", "guard", "effects", "provenance"});
  Transition t;
  t.id = get_opt_string(j, path, "id").value_or("");
  t.source = get_string(j, path, "source");
  t.target = get_string(j, path, "target");
  t.trigger = get_opt_string(j, path, "trigger");
  t.guard = get_opt_string(j, path, "guard");
  if (const json* effects = get_array(j, path, "effects")) {
    for (std::size_t i = 0; i < effects->size(); ++i) {
      std::string epath = path + ".effects[" + std::to_string(i) + "]";
      const auto& e = (*effects)[i];
      check_keys(e, epath, {"signal", "target_block"});
      t.effects.push_back({get_string(e, epath, "signal"), get_string(e, epath, "target_block")});
    }
  }
  t.provenance = get_string_list(j, path, "provenance");
  return t;
}

StateMachine read_machine(const json& j, const std::string& path, const std::string& owner) {
  check_keys(j, path, {"initial", "states", "transitions"});
  StateMachine sm;
  sm.owner = owner;
  sm.initial = get_opt_string(j, path, "initial");
  for (auto& s : get_string_list(j, path, "states")) sm.states.push_back({std::move(s)});
  if (const json* ts = get_array(j, path, "transitions")) {
    for (std::size_t i = 0; i < ts->size(); ++i) {
      std::string tpath = path + ".transitions[" + std::to_string(i) + "]";
      Transition t = read_transition((*ts)[i], tpath);
      std::string expected = transition_id(owner, t);
      if (!t.id.empty() && t.id != expected) {
        throw ValidationError(tpath + ".id", "id '" + t.id + "' does not match content hash '" +
                                                 expected + "'");
      }
      t.id = expected;
      sm.transitions.push_back(std::move(t));
    }
  }
  return sm;
}

// ---- document writing -------------------------------------------------------

json write_transition(const Transition& t) {
  json j = json::object();
  j["id"] = t.id;
  j["source"] = t.source;
  j["target"] = t.target;
  if (t.trigger) j["trigger"] = *t.trigger;
  if (t.guard) j["guard"] = *t.guard;
  j["effects"] = json::array();
  for (const auto& e : t.effects) {
    j["effects"].push_back({{"signal", e.signal}, {"target_block", e.target_block}});
  }
  j["provenance"] = t.provenance;
  return j;
}

// ---- validation -------------------------------------------------------------

void check_identifier(std::string_view name, const std::string& path) {
  if (name.empty()) throw ValidationError(path, "name is empty");
  if (has_whitespace(name)) throw ValidationError(path, "name '" + std::string(name) + "' contains whitespace");
  if (normalize_name(name).empty()) {
    throw ValidationError(path, "name '" + std::string(name) + "' has no alphanumeric characters");
  }
}

void check_part_cycles(const SystemModel& model) {
  std::map<std::string, int> color;  // 0 unvisited, 1 on stack, 2 done
  std::vector<std::string> stack;

  auto visit = [&](auto&& self, const Block& b) -> void {
    color[b.name] = 1;
    stack.push_back(b.name);
    for (const auto& part : b.parts) {
      int c = color[part];
      if (c == 1) {
        std::string cycle;
        for (const auto& s : stack) cycle += s + " -> ";
        throw ValidationError("blocks[" + b.name + "].parts", "part cycle: " + cycle + part);
      }
      if (c == 0) {
        if (const Block* child = model.find_block(part)) self(self, *child);
      }
    }
    stack.pop_back();
    color[b.name] = 2;
  };
  for (const auto& b : model.blocks) {
    if (color[b.name] == 0) visit(visit, b);
  }
}

}  // namespace

MergeError::MergeError(Kind kind, const std::string& message)
    : Error(
          [kind] {
            switch (kind) {
              case Kind::UnknownOwner: return "UnknownOwner";
              case Kind::UnknownState: return "UnknownState";
              case Kind::UnknownSignal: return "UnknownSignal";
              case Kind::UnknownBlock: return "UnknownBlock";
            }
            return "MergeError";
          }(),
          message),
      kind_(kind) {}

bool StateMachine::has_state(std::string_view name) const {
  return std::any_of(states.begin(), states.end(), [&](const State& s) { return s.name == name; });
}

const Block* SystemModel::find_block(std::string_view n) const {
  for (const auto& b : blocks)
    if (b.name == n) return &b;
  return nullptr;
}

Block* SystemModel::find_block(std::string_view n) {
  for (auto& b : blocks)
    if (b.name == n) return &b;
  return nullptr;
}

const Signal* SystemModel::find_signal(std::string_view n) const {
  for (const auto& s : signals)
    if (s.name == n) return &s;
  return nullptr;
}

std::size_t SystemModel::transition_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks)
    if (b.state_machine) n += b.state_machine->transitions.size();
  return n;
}

std::string transition_id(std::string_view owner, const Transition& t) {
  std::vector<SendEffect> effects = t.effects;
  sort_unique(effects);
  json key = json::array();
  key.push_back(owner);
  key.push_back(t.source);
  key.push_back(t.target);
  key.push_back(t.trigger ? json(*t.trigger) : json(nullptr));
  json eff = json::array();
  for (const auto& e : effects) eff.push_back(json::array({e.signal, e.target_block}));
  key.push_back(std::move(eff));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(key.dump())));
  return buf;
}

void canonicalize(SystemModel& model) {
  auto by_name = [](const auto& a, const auto& b) { return a.name < b.name; };
  std::sort(model.signals.begin(), model.signals.end(), by_name);
  std::sort(model.blocks.begin(), model.blocks.end(), by_name);
  for (auto& b : model.blocks) {
    std::sort(b.parts.begin(), b.parts.end());
    std::sort(b.receivable_signals.begin(), b.receivable_signals.end());
    if (!b.state_machine) continue;
    auto& sm = *b.state_machine;
    sm.owner = b.name;
    std::sort(sm.states.begin(), sm.states.end(), by_name);
    for (auto& t : sm.transitions) {
      sort_unique(t.effects);
      sort_unique(t.provenance);
      t.id = transition_id(b.name, t);
    }
    std::sort(sm.transitions.begin(), sm.transitions.end(),
              [](const Transition& a, const Transition& b) { return a.id < b.id; });
  }
}

void validate_model(const SystemModel& model) {
  if (model.version != "1") {
    throw ValidationError("version", "unsupported version '" + model.version + "'");
  }

  std::map<std::string, std::string> seen_signals;
  for (const auto& s : model.signals) {
    std::string path = "signals[" + s.name + "]";
    check_identifier(s.name, path);
    auto [it, fresh] = seen_signals.emplace(normalize_name(s.name), s.name);
    if (!fresh) throw ValidationError(path, "duplicate signal (same normal form as '" + it->second + "')");
  }

  std::map<std::string, std::string> seen_blocks;
  for (const auto& b : model.blocks) {
    std::string path = "blocks[" + b.name + "]";
    check_identifier(b.name, path);
    auto [it, fresh] = seen_blocks.emplace(normalize_name(b.name), b.name);
    if (!fresh) throw ValidationError(path, "duplicate block (same normal form as '" + it->second + "')");
  }

  for (const auto& b : model.blocks) {
    std::string path = "blocks[" + b.name + "]";
    for (const auto& p : b.parts) {
      if (!model.find_block(p)) throw ValidationError(path + ".parts", "unknown block '" + p + "'");
    }
    for (const auto& r : b.receivable_signals) {
      if (!model.find_signal(r)) {
        throw ValidationError(path + ".receivable_signals", "unknown signal '" + r + "'");
      }
    }
    if (!b.state_machine) continue;
    const auto& sm = *b.state_machine;
    std::string smpath = path + ".state_machine";
    if (sm.owner != b.name) throw ValidationError(smpath, "owner '" + sm.owner + "' is not the enclosing block");
    std::set<std::string> states;
    for (const auto& s : sm.states) {
      check_identifier(s.name, smpath + ".states[" + s.name + "]");
      if (!states.insert(s.name).second) {
        throw ValidationError(smpath + ".states[" + s.name + "]", "duplicate state");
      }
    }
    if (sm.initial && !states.count(*sm.initial)) {
      throw ValidationError(smpath + ".initial", "unknown state '" + *sm.initial + "'");
    }
    std::set<std::string> ids;
    for (std::size_t i = 0; i < sm.transitions.size(); ++i) {
      const auto& t = sm.transitions[i];
      std::string tpath = smpath + ".transitions[" + (t.id.empty() ? std::to_string(i) : t.id) + "]";
      if (!states.count(t.source)) throw ValidationError(tpath + ".source", "unknown state '" + t.source + "'");
      if (!states.count(t.target)) throw ValidationError(tpath + ".target", "unknown state '" + t.target + "'");
      if (t.trigger && !model.find_signal(*t.trigger)) {
        throw ValidationError(tpath + ".trigger", "unknown signal '" + *t.trigger + "'");
      }
      for (const auto& e : t.effects) {
        if (!model.find_signal(e.signal)) {
          throw ValidationError(tpath + ".effects", "unknown signal '" + e.signal + "'");
        }
        if (!model.find_block(e.target_block)) {
          throw ValidationError(tpath + ".effects", "unknown block '" + e.target_block + "'");
        }
      }
      if (!ids.insert(transition_id(b.name, t)).second) {
        throw ValidationError(tpath, "duplicate transition");
      }
    }
  }

  check_part_cycles(model);
}

SystemModel load_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", e.what());
  }
  check_keys(doc, "$", {"version", "name", "signals", "blocks"});

  SystemModel model;
  model.version = get_opt_string(doc, "$", "version").value_or("1");
  model.name = get_opt_string(doc, "$", "name").value_or("");

  if (const json* signals = get_array(doc, "$", "signals")) {
    for (std::size_t i = 0; i < signals->size(); ++i) {
      std::string path = "signals[" + std::to_string(i) + "]";
      const auto& s = (*signals)[i];
      check_keys(s, path, {"name", "display"});
      model.signals.push_back({get_string(s, path, "name"), get_opt_string(s, path, "display")});
    }
  }
  if (const json* blocks = get_array(doc, "$", "blocks")) {
    for (std::size_t i = 0; i < blocks->size(); ++i) {
      std::string path = "blocks[" + std::to_string(i) + "]";
      const auto& bj = (*blocks)[i];
      check_keys(bj, path, {"name", "parts", "state_machine", "receivable_signals"});
      Block b;
      b.name = get_string(bj, path, "name");
      b.parts = get_string_list(bj, path, "parts");
      b.receivable_signals = get_string_list(bj, path, "receivable_signals");
      if (auto it = bj.find("state_machine"); it != bj.end() && !it->is_null()) {
        b.state_machine = read_machine(*it, "blocks[" + b.name + "].state_machine", b.name);
      }
      model.blocks.push_back(std::move(b));
    }
  }

  canonicalize(model);
  validate_model(model);
  return model;
}

std::string save_model(const SystemModel& input) {
  SystemModel model = input;
  canonicalize(model);

  json doc = json::object();
  doc["version"] = model.version;
  doc["name"] = model.name;
  doc["signals"] = json::array();
  for (const auto& s : model.signals) {
    json sj = {{"name", s.name}};
    if (s.display) sj["display"] = *s.display;
    doc["signals"].push_back(std::move(sj));
  }
  doc["blocks"] = json::array();
  for (const auto& b : model.blocks) {
    json bj = json::object();
    bj["name"] = b.name;
    bj["parts"] = b.parts;
    bj["receivable_signals"] = b.receivable_signals;
    if (b.state_machine) {
      const auto& sm = *b.state_machine;
      json smj = json::object();
      if (sm.initial) smj["initial"] = *sm.initial;
      smj["states"] = json::array();
      for (const auto& s : sm.states) smj["states"].push_back(s.name);
      smj["transitions"] = json::array();
      for (const auto& t : sm.transitions) smj["transitions"].push_back(write_transition(t));
      bj["state_machine"] = std::move(smj);
    }
    doc["blocks"].push_back(std::move(bj));
  }
  return doc.dump(2) + "\n";
}

std::string_view to_string(MergeOutcome o) {
  switch (o) {
    case MergeOutcome::Added: return "Added";
    case MergeOutcome::Duplicate: return "Duplicate";
    case MergeOutcome::Conflict: return "Conflict";
  }
  return "?";
}

MergeResult add_transition(const SystemModel& model, std::string_view owner, Transition t) {
  const Block* ob = model.find_block(owner);
  if (!ob || !ob->state_machine) {
    throw MergeError(MergeError::Kind::UnknownOwner,
                     "block '" + std::string(owner) + "' does not exist or has no state machine");
  }
  const auto& sm = *ob->state_machine;
  for (const auto* s : {&t.source, &t.target}) {
    if (!sm.has_state(*s)) {
      throw MergeError(MergeError::Kind::UnknownState,
                       "state '" + *s + "' is not in the machine of '" + std::string(owner) + "'");
    }
  }
  if (t.trigger && !model.find_signal(*t.trigger)) {
    throw MergeError(MergeError::Kind::UnknownSignal, "unknown signal '" + *t.trigger + "'");
  }
  for (const auto& e : t.effects) {
    if (!model.find_signal(e.signal)) {
      throw MergeError(MergeError::Kind::UnknownSignal, "unknown signal '" + e.signal + "'");
    }
    if (!model.find_block(e.target_block)) {
      throw MergeError(MergeError::Kind::UnknownBlock, "unknown block '" + e.target_block + "'");
    }
  }

  sort_unique(t.effects);
  sort_unique(t.provenance);
  t.id = transition_id(owner, t);

  MergeResult result{MergeOutcome::Added, model, t.id};
  auto& transitions = result.model.find_block(owner)->state_machine->transitions;
  for (auto& existing : transitions) {
    if (existing.id == t.id) {
      existing.provenance.insert(existing.provenance.end(), t.provenance.begin(), t.provenance.end());
      sort_unique(existing.provenance);
      result.outcome = MergeOutcome::Duplicate;
      return result;
    }
  }
  for (const auto& existing : transitions) {
    if (existing.source == t.source && existing.trigger == t.trigger) {
      result.outcome = MergeOutcome::Conflict;
      result.transition_id = existing.id;
      result.model = model;
      return result;
    }
  }
  transitions.push_back(std::move(t));
  std::sort(transitions.begin(), transitions.end(),
            [](const Transition& a, const Transition& b) { return a.id < b.id; });
  return result;
}

std::vector<std::string> lookup_elements(const SystemModel& model, std::span<const std::string> phrase,
                                         Metaclass metaclass, std::optional<std::string_view> scope) {
  std::vector<std::string> out;

  // A span of articles only names itself: a block may be called "A".
  std::string literal;
  bool only_articles = true;
  for (const auto& w : phrase) {
    std::string n = normalize_name(w);
    only_articles = only_articles && (n.empty() || is_article(n));
    literal += n;
  }
  if (only_articles) {
    if (literal.empty()) return out;
    auto take = [&](const std::string& name) {
      if (normalize_name(name) == literal) out.push_back(name);
    };
    switch (metaclass) {
      case Metaclass::Block:
        for (const auto& b : model.blocks) take(b.name);
        break;
      case Metaclass::State:
        for (const auto& b : model.blocks) {
          if (!b.state_machine || (scope && b.name != *scope)) continue;
          for (const auto& s : b.state_machine->states) take(s.name);
        }
        break;
      case Metaclass::Signal:
        for (const auto& s : model.signals) take(s.name);
        break;
    }
    sort_unique(out);
    return out;
  }

  switch (metaclass) {
    case Metaclass::Block: {
      std::vector<std::string> content;
      for (const auto& w : phrase) {
        std::string n = normalize_name(w);
        if (!n.empty() && !is_article(n)) content.push_back(std::move(n));
      }
      // Exact match first, then the longest suffix ("Emergency Brake" -> Brake).
      for (std::size_t start = 0; start < content.size() && out.empty(); ++start) {
        std::string key;
        for (std::size_t i = start; i < content.size(); ++i) key += content[i];
        for (const auto& b : model.blocks) {
          if (normalize_name(b.name) == key) out.push_back(b.name);
        }
      }
      break;
    }
    case Metaclass::State: {
      std::string key = normalize_phrase(phrase);
      if (key.empty()) break;
      for (const auto& b : model.blocks) {
        if (!b.state_machine || (scope && b.name != *scope)) continue;
        for (const auto& s : b.state_machine->states) {
          if (normalize_name(s.name) == key) out.push_back(s.name);
        }
      }
      break;
    }
    case Metaclass::Signal: {
      auto variants = normalize_signal_phrase(phrase);
      variants.erase("");
      for (const auto& s : model.signals) {
        if (variants.count(normalize_name(s.name))) out.push_back(s.name);
      }
      break;
    }
  }
  sort_unique(out);
  return out;
}

}  // namespace modcomplete
