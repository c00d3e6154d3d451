#include "modcomplete/matcher.hpp"

#include <algorithm>
#include <set>

#include "modcomplete/normalize.hpp"

namespace modcomplete {
namespace {

constexpr std::size_t kMaxSlotWords = 4;
constexpr std::size_t kMaxReportedReadings = 16;

struct Partial {
  BindingSet bindings;
  std::vector<AmbiguousSpan> ambiguous;
};

std::string elements_key(const BindingSet& b) {
  std::string key;
  for (const auto& x : b) key += x.role + '\x1f' + x.element + '\x1e';
  return key;
}

void dedupe(std::vector<Partial>& ps) {
  std::set<std::string> seen;
  std::vector<Partial> out;
  for (auto& p : ps) {
    if (seen.insert(elements_key(p.bindings)).second) out.push_back(std::move(p));
  }
  ps = std::move(out);
}

std::vector<std::string> texts(std::span<const Word> words) {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(w.text);
  return out;
}

std::string quoted_words(std::span<const Word> words) {
  std::string out;
  for (const auto& w : words) out += (out.empty() ? "" : " ") + w.text;
  return "\"" + out + "\"";
}

// Deepest point a clause search reached before failing.
struct Progress {
  bool set = false;
  std::size_t item = 0;
  std::size_t pos = 0;
  std::string role;
  std::string phrase;
  std::string message;

  void note(std::size_t i, std::size_t p, std::string r, std::string ph, std::string msg) {
    if (set && (i < item || (i == item && p <= pos))) return;
    set = true;
    item = i;
    pos = p;
    role = std::move(r);
    phrase = std::move(ph);
    message = std::move(msg);
  }
};

enum class SpanMode {
  Strict,  // multi-element spans are reported, not bound
  Branch,  // every candidate element becomes its own reading
};

class ClauseSearch {
 public:
  ClauseSearch(std::span<const Word> words, const ClauseTemplate& tmpl, const SystemModel& model, SpanMode mode,
               std::string_view owner_role, std::optional<std::string_view> fixed_scope)
      : words_(words), tmpl_(tmpl), model_(model), mode_(mode), owner_role_(owner_role), fixed_scope_(fixed_scope) {}

  void run(const Partial& start, std::vector<Partial>& out) {
    Partial cur = start;
    descend(0, 0, cur, out);
  }

  const Progress& progress() const { return progress_; }

 private:
  std::optional<std::string_view> state_scope(const Partial& cur) const {
    if (fixed_scope_) return fixed_scope_;
    if (owner_role_.empty()) return std::nullopt;
    for (const auto& b : cur.bindings)
      if (b.role == owner_role_) return std::string_view(b.element);
    return std::nullopt;
  }

  void descend(std::size_t item, std::size_t pos, Partial& cur, std::vector<Partial>& out) {
    const std::size_t n = words_.size();
    if (item == tmpl_.items.size()) {
      if (pos == n) {
        out.push_back(cur);
      } else {
        progress_.note(item, pos, "", quoted_words(words_.subspan(pos)), "unmatched trailing words");
      }
      return;
    }

    const TemplateItem& it = tmpl_.items[item];
    if (const auto* lit = std::get_if<Literal>(&it)) {
      std::size_t p = pos;
      while (true) {
        if (p < n && words_[p].lower == lit->word) descend(item + 1, p + 1, cur, out);
        if (p < n && is_article(words_[p].lower)) {
          ++p;
          continue;
        }
        break;
      }
      if (p >= n || words_[p].lower != lit->word) {
        progress_.note(item, p, "", p < n ? quoted_words(words_.subspan(p, 1)) : "end of clause",
                       "expected \"" + lit->word + "\"");
      }
      return;
    }

    if (const auto* opt = std::get_if<OptionalLiteral>(&it)) {
      descend(item + 1, pos, cur, out);
      if (pos < n && opt->words.count(words_[pos].lower)) descend(item + 1, pos + 1, cur, out);
      return;
    }

    const auto& slot = std::get<SlotPattern>(it);
    const auto scope = slot.metaclass == Metaclass::State ? state_scope(cur) : std::nullopt;
    bool any = false;
    std::string tried;
    for (std::size_t len = 1; len <= kMaxSlotWords && pos + len <= n; ++len) {
      auto span = words_.subspan(pos, len);
      auto candidates = lookup_elements(model_, texts(span), slot.metaclass, scope);
      if (candidates.empty()) {
        tried += (tried.empty() ? "" : " | ") + quoted_words(span);
        continue;
      }
      any = true;
      if (mode_ == SpanMode::Strict && candidates.size() > 1) {
        cur.ambiguous.push_back({slot.role, slot.metaclass, span_phrase(span), candidates});
        descend(item + 1, pos + len, cur, out);
        cur.ambiguous.pop_back();
        continue;
      }
      for (const auto& c : candidates) {
        cur.bindings.push_back({slot.role, slot.metaclass, span_phrase(span), c});
        descend(item + 1, pos + len, cur, out);
        cur.bindings.pop_back();
      }
    }
    if (!any) {
      std::string where = scope ? " in the machine of " + std::string(*scope) : "";
      progress_.note(item, pos, slot.role, pos < n ? tried : "end of clause",
                     "no " + std::string(to_string(slot.metaclass)) + where + " matches");
    }
  }

  std::span<const Word> words_;
  const ClauseTemplate& tmpl_;
  const SystemModel& model_;
  SpanMode mode_;
  std::string_view owner_role_;
  std::optional<std::string_view> fixed_scope_;
  Progress progress_;
};

// A requirement section as a list of clause word lists; `joiners[i]` is the
// keyword that split segment i from segment i-1.
struct Section {
  std::vector<std::vector<Word>> segments;
  std::vector<Word> joiners;
};

Section section_of(const std::vector<Clause>& clauses) {
  Section s;
  for (const auto& c : clauses) {
    s.segments.push_back(c.words);
    s.joiners.push_back({c.tokens.front().text, c.tokens.front().lower});
  }
  return s;
}

// Calls fn(groups) for every split of n segments into k non-empty runs;
// groups[i] is the first segment index of run i.
template <typename Fn>
void for_each_composition(std::size_t n, std::size_t k, Fn&& fn) {
  std::vector<std::size_t> starts(k);
  auto rec = [&](auto&& self, std::size_t group, std::size_t start) -> void {
    starts[group] = start;
    if (group + 1 == k) {
      fn(starts);
      return;
    }
    for (std::size_t next = start + 1; next + (k - group - 2) < n; ++next) self(self, group + 1, next);
  };
  if (k == 0 || n < k) return;
  rec(rec, 0, 0);
}

class MetaReqSolver {
 public:
  MetaReqSolver(const MetaReq& mr, const SystemModel& model, std::string_view owner_role,
                std::vector<Diagnostic>& diagnostics)
      : mr_(mr), model_(model), owner_role_(owner_role), diagnostics_(diagnostics) {}

  std::vector<Partial> solve(const Section& given, const Section& when, const Section& then) {
    std::vector<Partial> partials{Partial{}};
    const std::pair<ClauseKind, const Section*> order[] = {
        {ClauseKind::Given, &given}, {ClauseKind::When, &when}, {ClauseKind::Then, &then}};
    for (const auto& [kind, section] : order) {
      partials = solve_section(kind, *section, partials);
      if (partials.empty()) break;
    }
    return partials;
  }

  void shape(const std::string& message) { add({mr_.id, std::nullopt, 0, "", "", "", message}); }

 private:
  void add(Diagnostic d) {
    if (std::find(diagnostics_.begin(), diagnostics_.end(), d) == diagnostics_.end()) {
      diagnostics_.push_back(std::move(d));
    }
  }

  std::vector<Partial> solve_section(ClauseKind kind, const Section& section, const std::vector<Partial>& starts) {
    const auto& templates = mr_.section(kind);
    const std::size_t n = section.segments.size();
    if (templates.empty()) {
      if (n != 0) {
        shape(std::string(to_string(kind)) + " clauses present but '" + mr_.id + "' has no " +
              std::string(to_string(kind)) + " template");
        return {};
      }
      return starts;
    }
    if (n < templates.size()) {
      shape("'" + mr_.id + "' needs " + std::to_string(templates.size()) + " " + std::string(to_string(kind)) +
            " clause(s), requirement has " + std::to_string(n));
      return {};
    }

    std::vector<Partial> result;
    for_each_composition(n, templates.size(), [&](const std::vector<std::size_t>& group_starts) {
      std::vector<Partial> ps = starts;
      for (std::size_t g = 0; g < templates.size() && !ps.empty(); ++g) {
        std::size_t first = group_starts[g];
        std::size_t last = g + 1 < templates.size() ? group_starts[g + 1] : n;
        std::vector<Word> words = section.segments[first];
        for (std::size_t s = first + 1; s < last; ++s) {
          words.push_back(section.joiners[s]);
          words.insert(words.end(), section.segments[s].begin(), section.segments[s].end());
        }
        std::vector<Partial> next;
        for (const auto& p : ps) {
          ClauseSearch search(words, templates[g], model_, SpanMode::Branch, owner_role_, std::nullopt);
          std::size_t before = next.size();
          search.run(p, next);
          if (next.size() == before && search.progress().set) {
            const auto& pr = search.progress();
            std::string text;
            for (const auto& w : words) text += (text.empty() ? "" : " ") + w.text;
            add({mr_.id, kind, g, text, pr.role, pr.phrase,
                 pr.message + (pr.phrase.empty() ? "" : ": " + pr.phrase)});
          }
        }
        dedupe(next);
        ps = std::move(next);
      }
      result.insert(result.end(), ps.begin(), ps.end());
    });
    dedupe(result);
    return result;
  }

  const MetaReq& mr_;
  const SystemModel& model_;
  std::string_view owner_role_;
  std::vector<Diagnostic>& diagnostics_;
};

}  // namespace

bool same_elements(const BindingSet& a, const BindingSet& b) { return elements_key(a) == elements_key(b); }

std::string_view to_string(MatchFailure::Kind k) {
  return k == MatchFailure::Kind::NoMatch ? "NoMatch" : "AmbiguousMatch";
}

std::string span_phrase(std::span<const Word> words) {
  std::size_t b = 0, e = words.size();
  while (b < e && is_article(words[b].lower)) ++b;
  while (e > b && is_article(words[e - 1].lower)) --e;
  if (b == e) {
    b = 0;
    e = words.size();
  }
  std::string out;
  for (std::size_t i = b; i < e; ++i) out += (i == b ? "" : " ") + words[i].text;
  return out;
}

std::vector<Word> join_clauses(std::span<const Clause> clauses) {
  std::vector<Word> out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i > 0) out.push_back({clauses[i].tokens.front().text, clauses[i].tokens.front().lower});
    out.insert(out.end(), clauses[i].words.begin(), clauses[i].words.end());
  }
  return out;
}

std::vector<std::vector<Word>> disjunct_readings(const std::vector<Clause>& when, std::size_t index) {
  std::vector<std::vector<Word>> out{when[index].words};
  if (index == 0) return out;
  const auto& head = when[0].words;
  for (std::size_t p = 1; p < head.size(); ++p) {
    std::vector<Word> r(head.begin(), head.begin() + static_cast<std::ptrdiff_t>(p));
    r.insert(r.end(), when[index].words.begin(), when[index].words.end());
    out.push_back(std::move(r));
  }
  return out;
}

ClauseMatch match_clause(std::span<const Word> words, const ClauseTemplate& tmpl, const SystemModel& model,
                         std::optional<std::string_view> scope) {
  ClauseSearch search(words, tmpl, model, SpanMode::Strict, "", scope);
  std::vector<Partial> found;
  search.run(Partial{}, found);

  ClauseMatch out;
  std::set<std::string> seen;
  for (auto& p : found) {
    if (!p.ambiguous.empty()) {
      for (auto& a : p.ambiguous) {
        if (std::find(out.ambiguous.begin(), out.ambiguous.end(), a) == out.ambiguous.end()) {
          out.ambiguous.push_back(std::move(a));
        }
      }
      continue;
    }
    if (seen.insert(elements_key(p.bindings)).second) out.bindings.push_back(std::move(p.bindings));
  }
  return out;
}

MatchOutcome match_requirement(const RequirementAST& ast, const KnowledgeBase& kb, const SystemModel& model) {
  std::vector<Diagnostic> diagnostics;
  const Section given = section_of(ast.given);
  const Section then = section_of(ast.then);

  for (const auto& mr : kb.metareqs) {
    const MetaFragment* fragment = kb.find_fragment(mr.fragment);
    const std::string owner_role = fragment ? fragment->owner_role : "";
    MetaReqSolver solver(mr, model, owner_role, diagnostics);

    std::vector<std::vector<BindingSet>> readings;
    if (ast.when_mode == WhenMode::Conjunctive) {
      for (auto& p : solver.solve(given, section_of(ast.when), then)) readings.push_back({std::move(p.bindings)});
    } else {
      if (mr.when.size() != 1) {
        solver.shape("disjunctive when needs exactly one when template, '" + mr.id + "' has " +
                     std::to_string(mr.when.size()));
        continue;
      }
      std::vector<std::vector<Partial>> per_branch;
      for (std::size_t j = 0; j < ast.when.size(); ++j) {
        std::vector<Partial> branch;
        for (auto& words : disjunct_readings(ast.when, j)) {
          Section when;
          when.segments.push_back(std::move(words));
          when.joiners.push_back({"when", "when"});
          auto found = solver.solve(given, when, then);
          branch.insert(branch.end(), found.begin(), found.end());
        }
        dedupe(branch);
        if (branch.empty()) {
          per_branch.clear();
          break;
        }
        per_branch.push_back(std::move(branch));
      }
      // Cartesian product of branch readings, capped for reporting.
      if (!per_branch.empty()) {
        std::vector<std::vector<BindingSet>> acc{{}};
        for (const auto& branch : per_branch) {
          std::vector<std::vector<BindingSet>> next;
          for (const auto& prefix : acc) {
            for (const auto& p : branch) {
              if (next.size() > kMaxReportedReadings) break;
              auto r = prefix;
              r.push_back(p.bindings);
              next.push_back(std::move(r));
            }
          }
          acc = std::move(next);
        }
        readings = std::move(acc);
      }
    }

    if (readings.empty()) continue;
    if (readings.size() > 1) {
      if (readings.size() > kMaxReportedReadings) readings.resize(kMaxReportedReadings);
      return MatchFailure{MatchFailure::Kind::AmbiguousMatch, ast.id, mr.id, std::move(diagnostics),
                          std::move(readings)};
    }
    return MatchResult{ast.id, mr.id, std::move(readings.front()), mr.then.size()};
  }

  return MatchFailure{MatchFailure::Kind::NoMatch, ast.id, "", std::move(diagnostics), {}};
}

}  // namespace modcomplete
