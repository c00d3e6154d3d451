#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "modcomplete/generator.hpp"
#include "modcomplete/normalize.hpp"

namespace py = pybind11;
using namespace modcomplete;

namespace {

KnowledgeBase kb_or_default(const std::optional<std::string>& kb_text) {
  return kb_text ? parse_kb(*kb_text) : default_kb();
}

py::dict clause_sections(const RequirementAST& ast) {
  auto texts = [](const std::vector<Clause>& cs) {
    py::list out;
    for (const auto& c : cs) out.append(c.text());
    return out;
  };
  py::dict d;
  d["id"] = ast.id;
  d["given"] = texts(ast.given);
  d["when"] = texts(ast.when);
  d["then"] = texts(ast.then);
  d["when_mode"] = ast.when_mode == WhenMode::Disjunctive ? "disjunctive" : "conjunctive";
  return d;
}

py::list binding_sets(const std::vector<BindingSet>& sets) {
  py::list out;
  for (const auto& set : sets) {
    py::list l;
    for (const auto& b : set) {
      py::dict d;
      d["role"] = b.role;
      d["metaclass"] = std::string(to_string(b.metaclass));
      d["phrase"] = b.phrase;
      d["element"] = b.element;
      l.append(d);
    }
    out.append(l);
  }
  return out;
}

py::dict match(const std::string& requirement, const std::string& model_text,
               const std::optional<std::string>& kb_text, const std::string& id) {
  SystemModel model = load_model(model_text);
  KnowledgeBase kb = kb_or_default(kb_text);
  RequirementAST ast = parse_requirement({id, std::nullopt, std::nullopt, requirement});
  MatchOutcome outcome = match_requirement(ast, kb, model);

  py::dict d;
  d["requirement"] = id;
  if (const auto* m = std::get_if<MatchResult>(&outcome)) {
    d["status"] = "Match";
    d["metareq"] = m->metareq_id;
    d["alternatives"] = binding_sets(m->alternatives);
    d["diagnostics"] = py::list();
    return d;
  }
  const auto& f = std::get<MatchFailure>(outcome);
  d["status"] = std::string(to_string(f.kind));
  d["metareq"] = f.metareq_id.empty() ? py::object(py::none()) : py::object(py::str(f.metareq_id));
  py::list readings;
  for (const auto& r : f.readings) readings.append(binding_sets(r));
  d["readings"] = readings;
  py::list diags;
  for (const auto& x : f.diagnostics) diags.append(x.metareq_id + ": " + x.message);
  d["diagnostics"] = diags;
  return d;
}

py::dict complete(const std::string& model_text, const std::string& corpus_text,
                  const std::optional<std::string>& kb_text) {
  SystemModel model = load_model(model_text);
  auto corpus = parse_corpus(corpus_text);
  KnowledgeBase kb = kb_or_default(kb_text);
  Completion done = complete_model(model, corpus, kb);
  auto findings = check_acceptability(done.report, done.model);

  py::dict diagrams;
  for (const auto& rec : done.traces) {
    if (auto text = emit_requirement_diagram(rec, done.model)) diagrams[py::str(rec.requirement_id)] = *text;
  }
  py::dict d;
  d["model"] = save_model(done.model);
  d["report"] = report_to_json(done.report, findings);
  d["trace"] = emit_trace_json(done.traces);
  d["diagrams"] = diagrams;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Requirement-driven completion of partial state-machine models";

  static py::exception<Error> error_type(m, "ModcompleteError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error_type((e.code() + ": " + e.what()).c_str());
    }
  });

  m.def("tokenize", [](const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& t : tokenize(text)) {
      const char* kind = t.kind == Token::Kind::Keyword ? "keyword" : t.kind == Token::Kind::Word ? "word" : "punct";
      out.emplace_back(kind, t.text);
    }
    return out;
  }, py::arg("text"), "Split requirement text into (kind, text) tokens.");

  m.def("parse_requirement", [](const std::string& text, const std::string& id) {
    return clause_sections(parse_requirement({id, std::nullopt, std::nullopt, text}));
  }, py::arg("text"), py::arg("id") = "REQ-001", "Split a Given-When-Then requirement into clauses.");

  m.def("parse_corpus", [](const std::string& text) {
    py::list out;
    for (const auto& doc : parse_corpus(text)) {
      py::dict d;
      d["id"] = doc.id;
      d["feature"] = doc.feature;
      d["scenario"] = doc.scenario;
      d["text"] = doc.text;
      out.append(d);
    }
    return out;
  }, py::arg("text"));

  m.def("normalize_phrase", [](const std::vector<std::string>& words) { return normalize_phrase(words); },
        py::arg("words"));
  m.def("normalize_signal_phrase", [](const std::vector<std::string>& words) { return normalize_signal_phrase(words); },
        py::arg("words"));

  m.def("canonical_model", [](const std::string& text) { return save_model(load_model(text)); }, py::arg("text"),
        "Validate a model document and return its canonical serialization.");

  m.def("default_kb_text", [] { return std::string(default_kb_text()); });
  m.def("lint_kb", [](const std::string& text) {
    KnowledgeBase kb = parse_kb(text);
    py::dict d;
    py::list mrs, frs, shadowed;
    for (const auto& mr : kb.metareqs) mrs.append(mr.id);
    for (const auto& f : kb.fragments) frs.append(f.id);
    for (const auto& s : find_shadowed(kb)) shadowed.append(py::make_tuple(s.shadowing, s.shadowed));
    d["metareqs"] = mrs;
    d["fragments"] = frs;
    d["shadowed"] = shadowed;
    d["canonical"] = serialize_kb(kb);
    return d;
  }, py::arg("text"));

  m.def("match", &match, py::arg("requirement"), py::arg("model"), py::arg("kb") = py::none(),
        py::arg("id") = "REQ-001", "Match one requirement against the knowledge base and model.");
  m.def("complete", &complete, py::arg("model"), py::arg("corpus"), py::arg("kb") = py::none(),
        "Run the completion pipeline; returns model, report, trace and diagrams as text.");

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)
#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
