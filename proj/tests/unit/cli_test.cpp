#include "cli.hpp"

#include "rentbound/http_handler.hpp"
#include "synthetic_log.hpp"
#include "test_data.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rentbound;
namespace t = rentbound::testing;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / ("rentbound_cli_" + name);
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

TEST(Cli, Usage) {
  EXPECT_EQ(run({}).code, cli::exit_usage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::exit_usage);
  EXPECT_EQ(run({"--help"}).code, cli::exit_ok);
  EXPECT_EQ(run({"estimate", "--bogus"}).code, cli::exit_usage);
  EXPECT_EQ(run({"estimate", "noequals"}).code, cli::exit_usage);
}

TEST(Cli, Validate) {
  const CliRun r = run({"validate", "--ruleset", t::sample_ruleset_path()});
  EXPECT_EQ(r.code, cli::exit_ok) << r.err;
  EXPECT_EQ(r.out.rfind("ok: ", 0), 0u);
  EXPECT_EQ(run({"validate", "--ruleset", "/nonexistent.json"}).code, cli::exit_ruleset);
  const auto broken = temp_file("broken.json", "{\"meta\": 1}");
  EXPECT_EQ(run({"validate", "--ruleset", broken.string()}).code, cli::exit_ruleset);
}

TEST(Cli, BlankEstimateMatchesGlobalInterval) {
  const auto blank = temp_file("blank.txt", "");
  const CliRun r = run({"estimate", "--ruleset", t::sample_ruleset_path(), "--answers", blank.string(), "--exact"});
  ASSERT_EQ(r.code, cli::exit_ok) << r.err;
  const Ruleset rs = load_ruleset_file(t::sample_ruleset_path());
  const Interval global = estimate(default_answers(rs), rs).rent;
  EXPECT_EQ(r.out, "rent\t" + to_exact_string(global.lo()) + "\t" + to_exact_string(global.hi()) + "\ncomplete\tno\n");
}

TEST(Cli, EstimateMatchesHttp) {
  const std::string body = "M2_min=76&M2_max=85&ZI_min=3&ZI_max=4&BJ_min=1975&BJ_max=1976&District=Bogenhausen&BackPremises=No";
  const auto file = temp_file("answers.txt", "M2_min=76&M2_max=85\nZI_min=3&ZI_max=4\nBJ_min=1975&BJ_max=1976\n"
                                             "District=Bogenhausen\nBackPremises=No\n");
  const CliRun r = run({"estimate", "--ruleset", t::sample_ruleset_path(), "--answers", file.string(), "--exact"});
  ASSERT_EQ(r.code, cli::exit_ok) << r.err;
  const CliRun inline_run = run({"estimate", "--ruleset", t::sample_ruleset_path(), "--exact", "M2_min=76", "M2_max=85",
                              "ZI_min=3", "ZI_max=4", "BJ_min=1975", "BJ_max=1976", "District=Bogenhausen",
                              "BackPremises=No"});
  EXPECT_EQ(inline_run.out, r.out);
  const Ruleset rs = load_ruleset_file(t::sample_ruleset_path());
  const HandleResult h = handle("POST / HTTP/1.0\r\nContent-Length: " + std::to_string(body.size()) + "\r\n\r\n" + body, rs);
  ASSERT_EQ(h.outcome, Outcome::ok);
  std::istringstream lines(r.out);
  std::string tag, lo, hi;
  lines >> tag >> lo >> hi;
  EXPECT_NE(h.response.body.find("data-lo=\"" + lo + "\" data-hi=\"" + hi + "\""), std::string::npos);
}

TEST(Cli, EstimateErrorsAndLanguages) {
  const CliRun bad = run({"estimate", "--ruleset", t::sample_ruleset_path(), "ZI_min=1.5"});
  EXPECT_EQ(bad.code, cli::exit_estimate);
  EXPECT_NE(bad.err.find("integer required"), std::string::npos);
  EXPECT_EQ(run({"estimate", "--ruleset", t::sample_ruleset_path(), "--answers", "/nonexistent"}).code, cli::exit_io);
  const CliRun de = run({"estimate", "--ruleset", t::sample_ruleset_path()});
  EXPECT_NE(de.out.find("Geschätzte Miete"), std::string::npos);
  const CliRun en = run({"estimate", "--ruleset", t::sample_ruleset_path(), "--lang", "English"});
  EXPECT_NE(en.out.find("Estimated rent"), std::string::npos);
}

TEST(Cli, EnvironmentFillsOptions) {
  ::setenv("RENT_LANG", "English", 1);
  ::setenv("RENT_RULESET", t::sample_ruleset_path().c_str(), 1);
  const CliRun env = run({"estimate"});
  const CliRun flag = run({"estimate", "--lang", "German"});
  ::unsetenv("RENT_LANG");
  ::setenv("RENT_RULESET", "/nonexistent.json", 1);
  const CliRun missing = run({"validate"});
  const CliRun override_env = run({"validate", "--ruleset", t::sample_ruleset_path()});
  ::unsetenv("RENT_RULESET");
  EXPECT_NE(env.out.find("Estimated rent"), std::string::npos);
  EXPECT_NE(flag.out.find("Geschätzte Miete"), std::string::npos);
  EXPECT_EQ(missing.code, cli::exit_ruleset);
  EXPECT_EQ(override_env.code, cli::exit_ok);
}

TEST(Cli, Stats) {
  std::ostringstream log;
  t::write_log(log, t::synthetic_log());
  const auto file = temp_file("requests.log", log.str());
  const CliRun r = run({"stats", file.string()});
  ASSERT_EQ(r.code, cli::exit_ok) << r.err;
  EXPECT_NE(r.out.find("\tok\t5611\t78.1%"), std::string::npos);
  EXPECT_NE(r.out.find("\tMon\t1658\t23.4%"), std::string::npos);
  const CliRun j = run({"stats", "--format", "json", file.string()});
  EXPECT_EQ(j.out.front(), '{');
  EXPECT_EQ(run({"stats", "/nonexistent.log"}).code, cli::exit_io);
  const auto groups = temp_file("groups.txt", "example.org Nonsense\n");
  EXPECT_EQ(run({"stats", "--domain-groups", groups.string(), file.string()}).code, cli::exit_usage);
  EXPECT_EQ(run({"stats", "--domain-groups", t::data_path("domain_groups.txt"), file.string()}).code, cli::exit_ok);
}

TEST(Cli, CloneForm) {
  const CliRun r = run({"clone-form", "--ruleset", t::sample_ruleset_path(), "--lang", "English", "--fields", "basic",
                     "--fix", "District=Bogenhausen"});
  ASSERT_EQ(r.code, cli::exit_ok) << r.err;
  EXPECT_NE(r.out.find("name=\"District\" value=\"Bogenhausen\""), std::string::npos);
  EXPECT_EQ(run({"clone-form", "--ruleset", t::sample_ruleset_path(), "--fields", "Nope"}).code, cli::exit_usage);
  const auto out = std::filesystem::temp_directory_path() / "rentbound_cli_clone.html";
  EXPECT_EQ(run({"clone-form", "--ruleset", t::sample_ruleset_path(), "-o", out.string()}).code, cli::exit_ok);
  EXPECT_GT(std::filesystem::file_size(out), 0u);
}
