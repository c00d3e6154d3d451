#pragma once

#include <random>
#include <string>
#include <vector>

#include "modcomplete/kb.hpp"
#include "modcomplete/model.hpp"

namespace modcomplete::gen {

using Rng = std::mt19937_64;

// Valid, canonical model with parts, machines, transitions, guards and provenance.
SystemModel random_model(Rng& rng);

// Same content, every list shuffled.
SystemModel shuffled(const SystemModel& model, Rng& rng);

// KB source text that parses; random literals, optionals, slots and fragments.
std::string random_kb_text(Rng& rng);

// A small model for matcher testing: at most `max_elements` blocks, states
// and signals combined, names drawn from an overlapping vocabulary.
SystemModel matcher_model(Rng& rng, std::size_t max_elements = 8);

// Requirement text over `model`'s vocabulary, sometimes with unknown or
// reordered words; every clause has at most `max_clause_words` words.
std::string matcher_requirement(Rng& rng, const SystemModel& model, std::size_t max_clause_words = 12);

// Every keyword sequence over given/when/then/and/or up to `max_len`, each
// keyword followed by one word; paired with whether the grammar accepts it.
struct GrammarCase {
  std::string text;
  bool accepted;
};
std::vector<GrammarCase> grammar_suite(std::size_t max_len = 6);

// "BrakingSupervision" -> {"Braking", "Supervision"}
std::vector<std::string> split_camel(const std::string& name);

}  // namespace modcomplete::gen
