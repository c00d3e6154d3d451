#include "modcomplete/trace.hpp"

#include <algorithm>

#include "json.hpp"

namespace modcomplete {

using nlohmann::json;

namespace {

std::string stereotype_of(Metaclass m) {
  switch (m) {
    case Metaclass::Block: return "block";
    case Metaclass::State: return "state";
    case Metaclass::Signal: return "signal";
  }
  return "element";
}

std::string plantuml_string(std::string_view s) {
  std::string out;
  for (char c : s) out += (c == '"') ? '\'' : c;
  return out;
}

bool element_exists(const SatisfyLink& link, const SystemModel& model) {
  switch (link.metaclass) {
    case Metaclass::Block: return model.find_block(link.element) != nullptr;
    case Metaclass::Signal: return model.find_signal(link.element) != nullptr;
    case Metaclass::State: {
      const Block* b = link.scope ? model.find_block(*link.scope) : nullptr;
      return b && b->state_machine && b->state_machine->has_state(link.element);
    }
  }
  return false;
}

}  // namespace

TraceRecord build_trace(const MatchResult& match, MergeOutcome outcome, const std::string& owner,
                        std::vector<std::string> transition_ids, std::string requirement_text) {
  TraceRecord rec;
  rec.requirement_id = match.requirement_id;
  rec.requirement_text = std::move(requirement_text);
  rec.metareq_id = match.metareq_id;
  rec.outcome = std::string(to_string(outcome));
  rec.owner = owner;
  std::sort(transition_ids.begin(), transition_ids.end());
  transition_ids.erase(std::unique(transition_ids.begin(), transition_ids.end()), transition_ids.end());
  rec.generated = std::move(transition_ids);

  for (const auto& alt : match.alternatives) {
    for (const auto& b : alt) {
      TraceBinding tb{b.role, b.metaclass, b.element};
      if (std::find(rec.bindings.begin(), rec.bindings.end(), tb) == rec.bindings.end()) rec.bindings.push_back(tb);

      auto it = std::find_if(rec.satisfies.begin(), rec.satisfies.end(), [&](const SatisfyLink& l) {
        return l.element == b.element && l.metaclass == b.metaclass;
      });
      if (it == rec.satisfies.end()) {
        SatisfyLink link{b.element, b.metaclass, std::nullopt, "satisfy", {}};
        if (b.metaclass == Metaclass::State) link.scope = owner;
        rec.satisfies.push_back(std::move(link));
        it = rec.satisfies.end() - 1;
      }
      if (std::find(it->roles.begin(), it->roles.end(), b.role) == it->roles.end()) it->roles.push_back(b.role);
    }
  }
  std::stable_sort(rec.satisfies.begin(), rec.satisfies.end(), [](const SatisfyLink& a, const SatisfyLink& b) {
    return std::tie(a.metaclass, a.element) < std::tie(b.metaclass, b.element);
  });
  return rec;
}

std::string emit_trace_json(std::vector<TraceRecord> records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const TraceRecord& a, const TraceRecord& b) { return a.requirement_id < b.requirement_id; });
  json arr = json::array();
  for (const auto& r : records) {
    json bindings = json::array();
    for (const auto& b : r.bindings) {
      bindings.push_back({{"role", b.role}, {"metaclass", std::string(to_string(b.metaclass))}, {"element", b.element}});
    }
    json satisfies = json::array();
    for (const auto& s : r.satisfies) {
      json sj = {{"element", s.element},
                 {"metaclass", std::string(to_string(s.metaclass))},
                 {"stereotype", s.stereotype},
                 {"roles", s.roles}};
      if (s.scope) sj["scope"] = *s.scope;
      satisfies.push_back(std::move(sj));
    }
    arr.push_back({{"requirement", r.requirement_id},
                   {"text", r.requirement_text},
                   {"metareq", r.metareq_id},
                   {"outcome", r.outcome},
                   {"owner", r.owner},
                   {"bindings", std::move(bindings)},
                   {"generated", r.generated},
                   {"satisfies", std::move(satisfies)}});
  }
  return arr.dump(2) + "\n";
}

std::optional<std::string> emit_requirement_diagram(const TraceRecord& record, const SystemModel& model) {
  if (record.generated.empty()) return std::nullopt;

  std::string out;
  out += "@startuml RD-" + record.requirement_id + "\n";
  out += "hide empty members\n";
  out += "class \"" + plantuml_string(record.requirement_id) + "\" as REQ <<requirement>> {\n";
  out += "  id = \"" + plantuml_string(record.requirement_id) + "\"\n";
  out += "  text = \"" + plantuml_string(record.requirement_text) + "\"\n";
  out += "  metareq = " + record.metareq_id + "\n";
  out += "}\n";

  std::size_t n = 0;
  std::string edges;
  for (const auto& link : record.satisfies) {
    if (!element_exists(link, model)) continue;
    std::string alias = "E" + std::to_string(++n);
    std::string label = link.scope ? *link.scope + "::" + link.element : link.element;
    out += "class \"" + plantuml_string(label) + "\" as " + alias + " <<" + stereotype_of(link.metaclass) + ">>\n";
    edges += alias + " ..> REQ : <<" + link.stereotype + ">>\n";
    std::string roles;
    for (const auto& r : link.roles) roles += (roles.empty() ? "" : ", ") + r;
    edges += "note bottom of " + alias + " : roles: " + roles + "\n";
  }
  out += edges;
  out += "@enduml\n";
  return out;
}

std::string diagram_file_name(const std::string& requirement_id) { return "RD-" + requirement_id + ".puml"; }

}  // namespace modcomplete
