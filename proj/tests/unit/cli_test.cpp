#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using metareduce::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_set(const std::string& name, const std::string& body) {
  auto p = fs::temp_directory_path() / ("metareduce_cli_" + name + ".txt");
  std::ofstream(p) << body;
  return p;
}

const char* kIntro =
    "P(A,B) :- Q(A,B).\n"
    "P(A,B) :- Q(A,B),R(A).\n"
    "P(A,B) :- Q(A,B),R(A,B).\n";

}  // namespace

TEST(Cli, EnumerateCount) {
  auto r = call({"enumerate", "--constraint", "connected", "--arities", "1,2", "--max-body", "3",
                 "--count-only"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1033\n");
}

TEST(Cli, EnumerateJson) {
  auto r = call({"enumerate", "--arities", "1", "--max-body", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["count"], 2);
  EXPECT_EQ(j["metarules"][0], "P(A) :- Q(A).");
}

TEST(Cli, ReduceSubsumptionDyadic) {
  auto r = call({"reduce", "--constraint", "connected", "--arities", "2", "--max-body", "5",
                 "--relation", "s"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "P(A,B) :- Q(A,C).\nP(A,B) :- Q(B,C).\nP(A,B) :- Q(C,A).\nP(A,B) :- Q(C,B).\n");
}

TEST(Cli, ReduceJsonReport) {
  auto set = write_set("intro4", std::string(kIntro) + "P(A,B) :- Q(A,B),R(A,B),S(A,B).\n");
  auto r = call({"reduce", "--set", set.string(), "--relation", "d", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["relation"], "D");
  EXPECT_EQ(j["input_count"], 4);
  EXPECT_EQ(j["kept"].size(), 3u);
  EXPECT_EQ(j["removed_count"], 1);
  EXPECT_EQ(j["removed"][0]["reason"], "derived");
  EXPECT_TRUE(j["removed"][0].contains("trace"));
  EXPECT_EQ(j["source"], set.string());
  EXPECT_TRUE(j.contains("duration_ms"));
  EXPECT_TRUE(j.contains("version"));
}

TEST(Cli, ReduceOntoTarget) {
  auto set = write_set("worked", "P(A,B) :- Q(B,A).\nP(A,B) :- Q(A,A),R(B,B).\n"
                                 "P(A,B) :- Q(A,C),R(B,C).\n"
                                 "P(A,B) :- Q(B,C),R(A,D),S(A,D),T(B,C).\n");
  auto r = call({"reduce", "--set", set.string(), "--relation", "e", "--target-max-body", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "P(A,B) :- Q(B,A).\nP(A,B) :- Q(A,A),R(B,B).\nP(A,B) :- Q(A,C),R(B,C).\n");
  auto input = call({"reduce", "--set", set.string(), "--relation", "e", "--order", "input"});
  EXPECT_EQ(input.out, "P(A,B) :- Q(B,A).\nP(A,B) :- Q(A,C),R(A,C),S(B,D),T(B,D).\n");
}

TEST(Cli, ReduceOntoTooSmallTarget) {
  auto set = write_set("chain", "P(A,B) :- Q(A,C),R(C,B).\n");
  auto r = call({"reduce", "--set", set.string(), "--relation", "d", "--target-max-body", "1"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, CheckRedundantAndNot) {
  auto set = write_set("intro", kIntro);
  auto yes = call({"check", "--relation", "d", "--depth", "7", "--set", set.string(), "--clause",
                   "P(A,B) :- Q(A,B),R(A,B),S(A,B)."});
  EXPECT_EQ(yes.code, 0);
  EXPECT_EQ(yes.out, "redundant (derived)\n");
  auto no = call({"check", "--relation", "s", "--set", set.string(), "--clause",
                  "P(A,B) :- Q(B,A)."});
  EXPECT_EQ(no.code, 1);
  EXPECT_EQ(no.out, "not redundant\n");
}

TEST(Cli, DeriveTrace) {
  auto set = write_set("derive", "P(A,B) :- Q(B,A).\nP(A,B) :- Q(A,C),R(C,B).\n");
  auto r = call({"derive", "--set", set.string(), "--clause", "P(A,B) :- Q(C,A),R(C,B).",
                 "--depth", "1", "--trace"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("P(A,B) :- Q(C,A),R(C,B)."), std::string::npos);
  auto none = call({"derive", "--set", set.string(), "--clause", "P(A,B) :- Q(C,A),R(C,B).",
                    "--depth", "0"});
  EXPECT_EQ(none.code, 1);
}

TEST(Cli, Witness) {
  auto r = call({"witness", "--name", "ci"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "P(A,B) :- Q(A,C),R(A,D),S(B,C),T(B,D),U(C,D).\n");
  EXPECT_EQ(call({"witness", "--name", "ca", "--param", "9"}).code, 2);
}

TEST(Cli, Hspace) {
  auto r = call({"hspace", "--predicates", "2", "--metarules", "3", "--max-body", "2",
                 "--clauses", "2"});
  EXPECT_EQ(r.out, "576\n");
  auto big = call({"hspace", "--predicates", "20", "--metarules", "9", "--max-body", "2",
                   "--clauses", "5", "--format", "json"});
  auto j = nlohmann::json::parse(big.out);
  EXPECT_EQ(j["size"], "1934917632000000000000000");
}

TEST(Cli, WritesToFile) {
  auto p = fs::temp_directory_path() / "metareduce_cli_out.txt";
  fs::remove(p);
  auto r = call({"witness", "--name", "datalog-s", "--out", p.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "P(A,B) :- Q(A),R(B).");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"frobnicate"}).code, 2);
  EXPECT_EQ(call({"enumerate", "--arities", "x"}).code, 2);
  EXPECT_EQ(call({"enumerate", "--constraint", "weird"}).code, 2);
  EXPECT_EQ(call({"check", "--set", "/nonexistent/file", "--clause", "P(A) :- Q(A)."}).code, 2);
  auto set = write_set("bad", "P(A,B).\n");
  EXPECT_EQ(call({"reduce", "--set", set.string()}).code, 2);
  EXPECT_EQ(call({"reduce", "--arities", "2", "--max-body", "2", "--relation", "q"}).code, 2);
  EXPECT_EQ(call({"--help"}).code, 0);
}

TEST(Cli, ResourceErrors) {
  EXPECT_EQ(call({"enumerate", "--arities", "1,2", "--max-body", "9", "--count-only"}).code, 3);
  EXPECT_EQ(call({"reduce", "--arities", "1,2", "--max-body", "4", "--relation", "d",
                  "--timeout", "1"})
                .code,
            3);
}
