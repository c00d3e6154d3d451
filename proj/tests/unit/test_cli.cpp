#include "doctest.h"
#include "fixtures.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "modcomplete/cli.hpp"
#include "modcomplete/model.hpp"

using namespace modcomplete;
using namespace modcomplete::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("modcomplete-test-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

cli::RunConfig config_for(const TempDir& dir, const std::string& model, const std::string& corpus) {
  cli::RunConfig c;
  c.model_path = fixture_path(model);
  c.corpus_path = fixture_path(corpus);
  c.out_model_path = dir.file("out.json");
  c.report_path = dir.file("report.json");
  c.trace_path = dir.file("trace.json");
  c.diagram_dir = dir.file("diagrams");
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("complete railway") {
  TempDir dir;
  auto c = config_for(dir, "railway_model.json", "railway.feature");
  std::ostringstream out, err;
  CHECK(cli::cmd_complete(c, out, err) == cli::kExitOk);
  CHECK(err.str().empty());
  CHECK(fs::exists(c.out_model_path));
  CHECK(fs::exists(c.report_path));
  CHECK(fs::exists(c.trace_path));
  CHECK(fs::exists(fs::path(*c.diagram_dir) / "RD-REQ-001.puml"));
  CHECK(out.str().find("added: 1") != std::string::npos);
  SystemModel m = load_model(slurp(c.out_model_path));
  CHECK(m.transition_count() == 1);
  CHECK(slurp(c.out_model_path) == save_model(m));
}

TEST_CASE("conflict exits with findings") {
  TempDir dir;
  auto c = config_for(dir, "railway_model.json", "conflict.feature");
  std::ostringstream out, err;
  CHECK(cli::cmd_complete(c, out, err) == cli::kExitFindings);
  CHECK(out.str().find("error: Conflict") != std::string::npos);
  CHECK(fs::exists(c.report_path));
}

TEST_CASE("missing input writes nothing") {
  TempDir dir;
  auto c = config_for(dir, "railway_model.json", "railway.feature");
  c.model_path = dir.file("nope.json");
  std::ostringstream out, err;
  CHECK(cli::cmd_complete(c, out, err) == cli::kExitInputFailure);
  CHECK(err.str().find("IoError") != std::string::npos);
  CHECK_FALSE(fs::exists(c.out_model_path));
  CHECK_FALSE(fs::exists(c.report_path));
  CHECK_FALSE(fs::exists(c.trace_path));

  write(dir.file("bad.json"), "{\"version\": \"1\", \"blocks\": 7}");
  c.model_path = dir.file("bad.json");
  std::ostringstream out2, err2;
  CHECK(cli::cmd_complete(c, out2, err2) == cli::kExitInputFailure);
  CHECK(err2.str().find("SchemaError") != std::string::npos);
  CHECK_FALSE(fs::exists(c.out_model_path));
}

TEST_CASE("check prints verdicts") {
  TempDir dir;
  auto c = config_for(dir, "railway_model.json", "railway.feature");
  std::ostringstream out, err;
  CHECK(cli::cmd_check(c, out, err) == cli::kExitOk);
  CHECK(out.str().find("REQ-001: MR1 (8 bindings)") != std::string::npos);
  CHECK_FALSE(fs::exists(c.out_model_path));

  c.explain = true;
  std::ostringstream explained, err2;
  cli::cmd_check(c, explained, err2);
  CHECK(explained.str().find("event (Signal) = EmergencyStop") != std::string::npos);
}

TEST_CASE("check names the unknown phrase") {
  TempDir dir;
  auto c = config_for(dir, "railway_halt_model.json", "mixed.feature");
  std::ostringstream out, err;
  cli::cmd_check(c, out, err);
  CHECK(out.str().find("REQ-004: NoMatch") != std::string::npos);
  CHECK(out.str().find("Spaceship") != std::string::npos);
  CHECK(out.str().find("REQ-005: MissingThen") != std::string::npos);
}

TEST_CASE("explain shows every ambiguous reading") {
  TempDir dir;
  auto c = config_for(dir, "ambiguous_model.json", "ambiguous.feature");
  c.explain = true;
  std::ostringstream out, err;
  cli::cmd_check(c, out, err);
  CHECK(out.str().find("AmbiguousMatch (MR1, 2 readings)") != std::string::npos);
  CHECK(out.str().find("reading 1:") != std::string::npos);
  CHECK(out.str().find("reading 2:") != std::string::npos);
  CHECK(out.str().find("= Activates") != std::string::npos);
}

TEST_CASE("strict turns warnings into failures") {
  TempDir dir;
  auto c = config_for(dir, "railway_model.json", "duplicate.feature");
  std::ostringstream o1, e1, o2, e2;
  CHECK(cli::cmd_complete(c, o1, e1) == cli::kExitOk);
  c.strict = true;
  CHECK(cli::cmd_complete(c, o2, e2) == cli::kExitFindings);
}

TEST_CASE("kb lint") {
  TempDir dir;
  std::ostringstream out, err;
  CHECK(cli::cmd_kb_lint(std::nullopt, true, out, err) == cli::kExitOk);
  CHECK(out.str() == "ok: 3 metareqs, 3 fragments, 0 warnings\n");

  write(dir.file("empty.kb"), "");
  std::ostringstream o2, e2;
  CHECK(cli::cmd_kb_lint(dir.file("empty.kb"), false, o2, e2) == cli::kExitOk);
  CHECK(o2.str().find("warning: no templates") != std::string::npos);
  std::ostringstream o3, e3;
  CHECK(cli::cmd_kb_lint(dir.file("empty.kb"), true, o3, e3) == cli::kExitFindings);

  write(dir.file("dup.kb"),
        "metareq A -> F:\n  given: \"<<Block as b>> in <<State as s>>\"\n  then: \"goes in <<State as t>>\"\n"
        "metareq A -> F:\n  given: \"<<Block as b>> in <<State as s>>\"\n  then: \"goes in <<State as t>>\"\n"
        "fragment F:\n  owner: b source: s target: t\n");
  std::ostringstream o4, e4;
  CHECK(cli::cmd_kb_lint(dir.file("dup.kb"), false, o4, e4) == cli::kExitInputFailure);
  CHECK(e4.str().find("DuplicateId") != std::string::npos);
}
