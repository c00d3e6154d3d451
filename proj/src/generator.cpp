#include "modcomplete/generator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "json.hpp"

namespace modcomplete {

using nlohmann::json;

namespace {

using GroupKey = std::tuple<std::string, std::string, std::optional<std::string>>;  // owner, source, trigger

struct Candidate {
  std::size_t index;
  RequirementDoc doc;
  MatchResult match;
  Instantiation inst;
};

struct Group {
  std::set<RightHandSide> rhs;
  std::set<std::string> requirement_ids;
  std::vector<std::size_t> candidates;  // candidate positions
};

RightHandSide rhs_of(const Transition& t) {
  RightHandSide r{t.target, t.effects};
  std::sort(r.effects.begin(), r.effects.end());
  return r;
}

std::string describe(const GroupKey& key) {
  const auto& [owner, source, trigger] = key;
  return owner + ": " + source + " on " + (trigger ? *trigger : std::string("completion"));
}

std::vector<std::string> diagnostic_lines(const MatchFailure& f) {
  std::vector<std::string> out;
  for (const auto& d : f.diagnostics) {
    std::string line = d.metareq_id + ": ";
    if (d.clause_kind) {
      line += std::string(to_string(*d.clause_kind)) + " template " + std::to_string(d.template_index + 1) +
              " vs \"" + d.clause_text + "\": ";
      if (!d.role.empty()) line += "slot " + d.role + ": ";
    }
    line += d.message;
    out.push_back(std::move(line));
  }
  for (std::size_t i = 0; i < f.readings.size(); ++i) {
    std::string line = f.metareq_id + " reading " + std::to_string(i + 1) + ":";
    for (std::size_t alt = 0; alt < f.readings[i].size(); ++alt) {
      if (f.readings[i].size() > 1) line += " [branch " + std::to_string(alt + 1) + "]";
      for (const auto& b : f.readings[i][alt]) line += " " + b.role + "=" + b.element;
    }
    out.push_back(std::move(line));
  }
  return out;
}

json effects_json(const std::vector<SendEffect>& effects) {
  json arr = json::array();
  for (const auto& e : effects) arr.push_back({{"signal", e.signal}, {"target_block", e.target_block}});
  return arr;
}

}  // namespace

GenerationError::GenerationError(Kind kind, const std::string& message)
    : Error(
          [kind] {
            switch (kind) {
              case Kind::StateNotInOwnerMachine: return "StateNotInOwnerMachine";
              case Kind::OwnerHasNoStateMachine: return "OwnerHasNoStateMachine";
              case Kind::MissingRole: return "MissingRole";
              case Kind::InconsistentOwner: return "InconsistentOwner";
            }
            return "GenerationError";
          }(),
          message),
      kind_(kind) {}

std::string_view to_string(Finding::Severity s) {
  switch (s) {
    case Finding::Severity::Error: return "error";
    case Finding::Severity::Warning: return "warning";
    case Finding::Severity::Info: return "info";
  }
  return "?";
}

Instantiation instantiate_fragment(const MetaFragment& fragment, const MatchResult& match, const SystemModel& model) {
  Instantiation out;
  for (const auto& bindings : match.alternatives) {
    auto bound = [&](const std::string& role) -> const std::string& {
      for (const auto& b : bindings)
        if (b.role == role) return b.element;
      throw GenerationError(GenerationError::Kind::MissingRole,
                            "fragment '" + fragment.id + "' needs role '" + role + "', which is unbound");
    };

    const std::string& owner = bound(fragment.owner_role);
    if (out.owner.empty()) {
      out.owner = owner;
    } else if (out.owner != owner) {
      throw GenerationError(GenerationError::Kind::InconsistentOwner,
                            "when-branches bind the owner to both '" + out.owner + "' and '" + owner + "'");
    }
    const Block* ob = model.find_block(owner);
    if (!ob || !ob->state_machine) {
      throw GenerationError(GenerationError::Kind::OwnerHasNoStateMachine,
                            "block '" + owner + "' has no state machine");
    }

    Transition t;
    t.source = bound(fragment.source_role);
    t.target = bound(fragment.target_role);
    for (const auto* s : {&t.source, &t.target}) {
      if (!ob->state_machine->has_state(*s)) {
        throw GenerationError(GenerationError::Kind::StateNotInOwnerMachine,
                              "state '" + *s + "' is not in the state machine of '" + owner + "'");
      }
    }
    if (fragment.trigger_role) t.trigger = bound(*fragment.trigger_role);
    for (const auto& spec : fragment.effects) {
      SendEffect e{bound(spec.signal_role), bound(spec.target_block_role)};
      const Block* target = model.find_block(e.target_block);
      if (target && std::find(target->receivable_signals.begin(), target->receivable_signals.end(), e.signal) ==
                        target->receivable_signals.end()) {
        Warning w{match.requirement_id, "SignalNotReceivable",
                  "block '" + e.target_block + "' does not list '" + e.signal + "' as receivable"};
        if (std::find(out.warnings.begin(), out.warnings.end(), w) == out.warnings.end()) out.warnings.push_back(w);
      }
      t.effects.push_back(std::move(e));
    }
    std::sort(t.effects.begin(), t.effects.end());
    t.effects.erase(std::unique(t.effects.begin(), t.effects.end()), t.effects.end());
    t.provenance = {match.requirement_id};
    t.id = transition_id(owner, t);

    bool seen = std::any_of(out.transitions.begin(), out.transitions.end(),
                            [&](const Transition& x) { return x.id == t.id; });
    if (!seen) out.transitions.push_back(std::move(t));
  }
  return out;
}

Completion complete_model(const SystemModel& input, const std::vector<RequirementDoc>& corpus,
                          const KnowledgeBase& kb) {
  Completion result{input, {}, {}};
  canonicalize(result.model);
  auto& report = result.report;

  // Phase 1: every requirement on its own.
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const RequirementDoc& doc = corpus[i];
    try {
      RequirementAST ast = parse_requirement(doc);
      MatchOutcome outcome = match_requirement(ast, kb, result.model);
      if (auto* failure = std::get_if<MatchFailure>(&outcome)) {
        report.unmatched.push_back({doc.id, std::string(to_string(failure->kind)), diagnostic_lines(*failure)});
        continue;
      }
      auto& match = std::get<MatchResult>(outcome);
      report.matched.push_back({doc.id, match.metareq_id, match.bindings().size(), match.alternatives_consumed(),
                                match.then_templates});
      const MetaReq* mr = nullptr;
      for (const auto& m : kb.metareqs)
        if (m.id == match.metareq_id) mr = &m;
      const MetaFragment* fragment = kb.find_fragment(mr->fragment);
      Instantiation inst = instantiate_fragment(*fragment, match, result.model);
      report.warnings.insert(report.warnings.end(), inst.warnings.begin(), inst.warnings.end());
      candidates.push_back({i, doc, std::move(match), std::move(inst)});
    } catch (const Error& e) {
      report.unmatched.push_back({doc.id, e.code(), {e.what()}});
    }
  }

  // Phase 2: conflicts are decided over the whole batch plus the existing model.
  std::map<GroupKey, Group> groups;
  for (const auto& b : result.model.blocks) {
    if (!b.state_machine) continue;
    for (const auto& t : b.state_machine->transitions) {
      auto& g = groups[{b.name, t.source, t.trigger}];
      g.rhs.insert(rhs_of(t));
      g.requirement_ids.insert(t.provenance.begin(), t.provenance.end());
    }
  }
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (const auto& t : candidates[c].inst.transitions) {
      auto& g = groups[{candidates[c].inst.owner, t.source, t.trigger}];
      g.rhs.insert(rhs_of(t));
      g.requirement_ids.insert(candidates[c].doc.id);
      g.candidates.push_back(c);
    }
  }
  std::vector<bool> withheld(candidates.size(), false);
  for (const auto& [key, g] : groups) {
    if (g.rhs.size() < 2 || g.candidates.empty()) continue;
    const auto& [owner, source, trigger] = key;
    report.conflicts.push_back({owner, source, trigger, {g.rhs.begin(), g.rhs.end()},
                                {g.requirement_ids.begin(), g.requirement_ids.end()}});
    for (std::size_t c : g.candidates) withheld[c] = true;
  }

  // Phase 3: merge the rest in corpus order.
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (withheld[c]) continue;
    const Candidate& cand = candidates[c];
    std::vector<std::string> ids;
    bool any_added = false;
    for (const auto& t : cand.inst.transitions) {
      MergeResult merged = add_transition(result.model, cand.inst.owner, t);
      if (merged.outcome == MergeOutcome::Conflict) {
        throw Error("InternalError", "unexpected conflict for '" + cand.doc.id + "' in " +
                                         describe({cand.inst.owner, t.source, t.trigger}));
      }
      any_added = any_added || merged.outcome == MergeOutcome::Added;
      ids.push_back(merged.transition_id);
      result.model = std::move(merged.model);
    }
    for (const auto& id : ids) {
      if (any_added) {
        report.added.push_back({cand.doc.id, cand.inst.owner, id});
      } else {
        report.duplicates.push_back({cand.doc.id, cand.inst.owner, id});
      }
    }
    result.traces.push_back(build_trace(cand.match, any_added ? MergeOutcome::Added : MergeOutcome::Duplicate,
                                        cand.inst.owner, ids, cand.doc.text));
  }

  validate_model(result.model);
  return result;
}

std::vector<Finding> check_acceptability(const CompletionReport& report, const SystemModel& model) {
  using S = Finding::Severity;
  std::vector<Finding> out;

  for (const auto& c : report.conflicts) {
    std::string targets;
    for (const auto& r : c.targets) targets += (targets.empty() ? "" : " / ") + r.target;
    out.push_back({S::Error, "Conflict", c.requirement_ids,
                   describe({c.owner, c.source, c.trigger}) + " leads to different outcomes: " + targets});
  }

  std::vector<std::string> seen;
  for (const auto& d : report.duplicates) {
    if (std::find(seen.begin(), seen.end(), d.requirement_id) != seen.end()) continue;
    seen.push_back(d.requirement_id);
    std::vector<std::string> ids{d.requirement_id};
    if (const Block* b = model.find_block(d.owner); b && b->state_machine) {
      for (const auto& t : b->state_machine->transitions) {
        if (t.id != d.transition_id) continue;
        for (const auto& p : t.provenance)
          if (p != d.requirement_id) ids.push_back(p);
      }
    }
    out.push_back({S::Warning, "Redundancy", ids,
                   d.requirement_id + " specifies transition " + d.transition_id + " of " + d.owner +
                       ", which is already specified"});
  }

  for (const auto& w : report.warnings) out.push_back({S::Warning, w.kind, {w.requirement_id}, w.message});

  for (const auto& m : report.matched) {
    if (m.then_templates > 1) {
      out.push_back({S::Info, "NonSingular", {m.requirement_id},
                     m.requirement_id + " states " + std::to_string(m.then_templates) + " outcomes (" + m.metareq_id +
                         ")"});
    }
  }

  for (const auto& u : report.unmatched) {
    out.push_back({S::Info, "Unverifiable", {u.requirement_id}, u.requirement_id + ": " + u.error});
  }
  return out;
}

std::string report_to_json(const CompletionReport& report, const std::vector<Finding>& findings) {
  json doc = json::object();

  doc["added"] = json::array();
  for (const auto& a : report.added) {
    doc["added"].push_back({{"requirement", a.requirement_id}, {"owner", a.owner}, {"transition", a.transition_id}});
  }
  doc["duplicates"] = json::array();
  for (const auto& d : report.duplicates) {
    doc["duplicates"].push_back(
        {{"requirement", d.requirement_id}, {"owner", d.owner}, {"transition", d.transition_id}});
  }
  doc["conflicts"] = json::array();
  for (const auto& c : report.conflicts) {
    json targets = json::array();
    for (const auto& r : c.targets) targets.push_back({{"target", r.target}, {"effects", effects_json(r.effects)}});
    doc["conflicts"].push_back({{"owner", c.owner},
                                {"source", c.source},
                                {"trigger", c.trigger ? json(*c.trigger) : json(nullptr)},
                                {"targets", std::move(targets)},
                                {"requirements", c.requirement_ids}});
  }
  doc["unmatched"] = json::array();
  for (const auto& u : report.unmatched) {
    doc["unmatched"].push_back({{"requirement", u.requirement_id}, {"error", u.error}, {"diagnostics", u.diagnostics}});
  }
  doc["warnings"] = json::array();
  for (const auto& w : report.warnings) {
    doc["warnings"].push_back({{"requirement", w.requirement_id}, {"kind", w.kind}, {"message", w.message}});
  }
  doc["matched"] = json::array();
  for (const auto& m : report.matched) {
    doc["matched"].push_back({{"requirement", m.requirement_id},
                              {"metareq", m.metareq_id},
                              {"bindings", m.bindings},
                              {"alternatives", m.alternatives},
                              {"then_templates", m.then_templates}});
  }
  doc["findings"] = json::array();
  std::size_t errors = 0, warnings = 0, infos = 0;
  for (const auto& f : findings) {
    doc["findings"].push_back({{"severity", std::string(to_string(f.severity))},
                               {"kind", f.kind},
                               {"requirements", f.requirement_ids},
                               {"message", f.message}});
    (f.severity == Finding::Severity::Error ? errors : f.severity == Finding::Severity::Warning ? warnings : infos)++;
  }
  doc["summary"] = {{"added", report.added.size()},
                    {"duplicates", report.duplicates.size()},
                    {"conflicts", report.conflicts.size()},
                    {"unmatched", report.unmatched.size()},
                    {"errors", errors},
                    {"warnings", warnings},
                    {"infos", infos}};
  return doc.dump(2) + "\n";
}

}  // namespace modcomplete
