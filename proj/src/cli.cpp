#include "modcomplete/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "modcomplete/generator.hpp"

namespace modcomplete::cli {
namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Inputs {
  SystemModel model;
  std::vector<RequirementDoc> corpus;
  KnowledgeBase kb;
};

// Throws Error on any unreadable or invalid input.
Inputs load_inputs(const RunConfig& config) {
  if (config.model_path.empty()) throw Error("UsageError", "--model is required");
  if (config.corpus_path.empty()) throw Error("UsageError", "--reqs is required");
  Inputs in;
  in.model = load_model(read_file(config.model_path));
  in.corpus = parse_corpus(read_file(config.corpus_path));
  in.kb = config.kb_path && !config.kb_path->empty() ? parse_kb(read_file(*config.kb_path)) : default_kb();
  return in;
}

// Writes every file to a sibling temporary first, then renames them all.
class AtomicWriter {
 public:
  void add(const fs::path& path, std::string content) { files_.emplace_back(path, std::move(content)); }

  void commit() {
    std::vector<std::pair<fs::path, fs::path>> staged;
    try {
      for (const auto& [path, content] : files_) {
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        fs::path tmp = path;
        tmp += ".tmp-" + std::to_string(::getpid());
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.close();
        if (!out) throw Error("IoError", "cannot write '" + tmp.string() + "'");
        staged.emplace_back(tmp, path);
      }
      for (const auto& [tmp, path] : staged) fs::rename(tmp, path);
    } catch (...) {
      std::error_code ec;
      for (const auto& [tmp, _] : staged) fs::remove(tmp, ec);
      throw;
    }
  }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

struct Counts {
  std::size_t errors = 0;
  std::size_t warnings = 0;
};

Counts print_findings(const std::vector<Finding>& findings, std::ostream& out) {
  Counts c;
  for (const auto& f : findings) {
    out << to_string(f.severity) << ": " << f.kind << ": " << f.message << "\n";
    if (f.severity == Finding::Severity::Error) ++c.errors;
    if (f.severity == Finding::Severity::Warning) ++c.warnings;
  }
  return c;
}

int exit_code(const Counts& c, bool strict) {
  if (c.errors > 0) return kExitFindings;
  if (strict && c.warnings > 0) return kExitFindings;
  return kExitOk;
}

void print_bindings(const BindingSet& set, std::ostream& out, const char* indent) {
  for (const auto& b : set) {
    out << indent << b.role << " (" << to_string(b.metaclass) << ") = " << b.element << "  <- \"" << b.phrase
        << "\"\n";
  }
}

void print_diagnostic(const Diagnostic& d, std::ostream& out) {
  out << "  " << d.metareq_id << ": ";
  if (d.clause_kind) {
    out << to_string(*d.clause_kind) << " template " << d.template_index + 1 << " vs \"" << d.clause_text << "\": ";
    if (!d.role.empty()) out << "slot " << d.role << ": ";
  }
  out << d.message << "\n";
}

void print_verdict(const RequirementDoc& doc, const KnowledgeBase& kb, const SystemModel& model, bool explain,
                   std::ostream& out) {
  RequirementAST ast;
  try {
    ast = parse_requirement(doc);
  } catch (const Error& e) {
    out << doc.id << ": " << e.code() << ": " << e.what() << "\n";
    return;
  }
  MatchOutcome outcome = match_requirement(ast, kb, model);
  if (const auto* m = std::get_if<MatchResult>(&outcome)) {
    out << doc.id << ": " << m->metareq_id << " (" << m->bindings().size() << " bindings";
    if (m->alternatives_consumed() > 1) out << ", " << m->alternatives_consumed() << " alternatives";
    out << ")\n";
    if (explain) {
      for (std::size_t i = 0; i < m->alternatives.size(); ++i) {
        if (m->alternatives.size() > 1) out << "  branch " << i + 1 << ":\n";
        print_bindings(m->alternatives[i], out, "    ");
      }
    }
    return;
  }

  const auto& f = std::get<MatchFailure>(outcome);
  if (f.kind == MatchFailure::Kind::AmbiguousMatch) {
    out << doc.id << ": AmbiguousMatch (" << f.metareq_id << ", " << f.readings.size() << " readings)\n";
    if (explain) {
      for (std::size_t r = 0; r < f.readings.size(); ++r) {
        out << "  reading " << r + 1 << ":\n";
        for (std::size_t alt = 0; alt < f.readings[r].size(); ++alt) {
          if (f.readings[r].size() > 1) out << "   branch " << alt + 1 << ":\n";
          print_bindings(f.readings[r][alt], out, "    ");
        }
      }
    }
    return;
  }

  out << doc.id << ": NoMatch\n";
  for (const auto& d : f.diagnostics) {
    if (explain || !d.phrase.empty()) print_diagnostic(d, out);
  }
}

}  // namespace

int cmd_complete(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Inputs in;
  try {
    if (config.out_model_path.empty() || config.report_path.empty() || config.trace_path.empty()) {
      throw Error("UsageError", "--out, --report and --trace are required");
    }
    in = load_inputs(config);
  } catch (const Error& e) {
    err << "error: " << e.code() << ": " << e.what() << "\n";
    return kExitInputFailure;
  }

  Completion done = complete_model(in.model, in.corpus, in.kb);
  std::vector<Finding> findings = check_acceptability(done.report, done.model);

  AtomicWriter writer;
  writer.add(config.out_model_path, save_model(done.model));
  writer.add(config.report_path, report_to_json(done.report, findings));
  writer.add(config.trace_path, emit_trace_json(done.traces));
  if (config.diagram_dir) {
    for (const auto& rec : done.traces) {
      if (auto diagram = emit_requirement_diagram(rec, done.model)) {
        writer.add(fs::path(*config.diagram_dir) / diagram_file_name(rec.requirement_id), std::move(*diagram));
      }
    }
  }
  try {
    writer.commit();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputFailure;
  }

  out << "requirements: " << in.corpus.size() << ", added: " << done.report.added.size()
      << ", duplicates: " << done.report.duplicates.size() << ", conflicts: " << done.report.conflicts.size()
      << ", unmatched: " << done.report.unmatched.size() << "\n";
  return exit_code(print_findings(findings, out), config.strict);
}

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Inputs in;
  try {
    in = load_inputs(config);
  } catch (const Error& e) {
    err << "error: " << e.code() << ": " << e.what() << "\n";
    return kExitInputFailure;
  }

  for (const auto& doc : in.corpus) print_verdict(doc, in.kb, in.model, config.explain, out);
  Completion done = complete_model(in.model, in.corpus, in.kb);
  return exit_code(print_findings(check_acceptability(done.report, done.model), out), config.strict);
}

int cmd_kb_lint(const std::optional<std::string>& kb_path, bool strict, std::ostream& out, std::ostream& err) {
  KnowledgeBase kb;
  try {
    kb = kb_path && !kb_path->empty() ? parse_kb(read_file(*kb_path)) : default_kb();
  } catch (const Error& e) {
    err << "error: " << e.code() << ": " << e.what() << "\n";
    return kExitInputFailure;
  }

  std::size_t warnings = 0;
  if (kb.metareqs.empty()) {
    out << "warning: no templates\n";
    ++warnings;
  }
  for (const auto& s : find_shadowed(kb)) {
    out << "warning: " << s.shadowed << " is shadowed by " << s.shadowing << "\n";
    ++warnings;
  }
  for (const auto& f : kb.fragments) {
    bool used = false;
    for (const auto& mr : kb.metareqs) used = used || mr.fragment == f.id;
    if (!used) {
      out << "warning: fragment " << f.id << " is not used\n";
      ++warnings;
    }
  }
  out << "ok: " << kb.metareqs.size() << " metareqs, " << kb.fragments.size() << " fragments, " << warnings
      << " warnings\n";
  return strict && warnings > 0 ? kExitFindings : kExitOk;
}

}  // namespace modcomplete::cli
