#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kTmp = SUMDENS_TEST_TMP;

std::string tmp(const std::string& name) { return kTmp + "/cli_" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::string& args, const std::string& tag) {
  const std::string o = tmp(tag + ".stdout"), e = tmp(tag + ".stderr");
  const std::string cmd = std::string("\"") + SUMDENS_CLI + "\" " + args + " >\"" + o + "\" 2>\"" + e + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(o);
  r.err = slurp(e);
  return r;
}

}  // namespace

TEST(Cli, CoverCounts) {
  auto r = run("cover --b primes --mod 720", "cover_primes");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "modulus 720\ncount 195\n");
  EXPECT_EQ(run("cover --b finite:0 --mod 720", "cover_zero").out, "modulus 720\ncount 1\n");
  auto d = run("cover --b factorials --mod 720 --dump", "cover_facts");
  EXPECT_EQ(d.out, "modulus 720\ncount 6\nresidues 0,1,2,6,24,120\n");
  EXPECT_EQ(run("cover --b primes --mod 40320", "cover_8").out, "modulus 40320\ncount 9220\n");
}

TEST(Cli, UsageErrorsExitOne) {
  for (const std::string args : {"construct --b primes --alpha 3/2", "construct --b primes --alpha 1/2 --bogus",
                                 "construct --alpha 1/2", "construct --b nosuch --alpha 1/2", "cover --b primes",
                                 "cover --b primes --mod 0", "frobnicate", "axioms --density other",
                                 "verify --tower /nonexistent/t.json"}) {
    auto r = run(args, "usage");
    EXPECT_EQ(r.code, 1) << args;
    EXPECT_NE(r.err.find("sumdens: error:"), std::string::npos) << args;
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << args << ": " << r.err;
  }
}

TEST(Cli, ResourceLimitsExitThree) {
  EXPECT_EQ(run("construct --b primes --alpha 1/2 --depth 12", "deep").code, 3);
  EXPECT_EQ(run("construct --b primes --alpha 1/2 --depth 11", "deep11").code, 3);
  EXPECT_EQ(run("estimate --b primes --alpha 1/2 --depth 4 --horizon 100000000", "horizon").code, 3);
  EXPECT_EQ(run("construct --b primes --alpha 1/2 --depth 9 --memory-cap 1000", "cap").code, 3);
}

TEST(Cli, ConstructThenVerify) {
  const std::string tower = tmp("tower.json"), csv = tmp("levels.csv");
  auto c = run("construct --b primes --alpha 1/2 --depth 7 --out " + tower + " --csv " + csv, "construct");
  ASSERT_EQ(c.code, 0) << c.err;
  const auto j = nlohmann::ordered_json::parse(slurp(tower));
  EXPECT_EQ(j["schema"], "sumdens.tower/1");
  EXPECT_EQ(j["config"]["command"], "construct");
  EXPECT_EQ(j["levels"].size(), 7u);
  EXPECT_EQ(slurp(csv).substr(0, 31), "n,size_H,h,k,densityA,L,U,epsil");

  auto v = run("verify --tower " + tower + " --horizon 100000", "verify");
  EXPECT_EQ(v.code, 0) << v.err;
  const auto rep = nlohmann::ordered_json::parse(v.out);
  EXPECT_EQ(rep["verdict"], "PASS");
  EXPECT_NE(v.err.find("PASS"), std::string::npos);

  auto t = j;
  t["levels"][4]["U"] = "1/2";
  std::ofstream(tmp("tampered.json")) << t.dump(2);
  auto bad = run("verify --tower " + tmp("tampered.json") + " --horizon 10000", "tampered");
  EXPECT_EQ(bad.code, 2);
  EXPECT_EQ(nlohmann::ordered_json::parse(bad.out)["verdict"], "FAIL");
  EXPECT_NE(bad.err.find("level 5"), std::string::npos) << bad.err;
}

TEST(Cli, OutputsAreDeterministic) {
  for (const std::string args : {"construct --b factorials --alpha 1/3 --depth 6",
                                 "estimate --b finite:0,5 --alpha 2/7 --depth 6 --horizon 50000",
                                 "profile --b powers --nmax 7", "axioms --samples 50 --seed 9"}) {
    auto a = run(args, "det_a"), b = run(args, "det_b");
    EXPECT_EQ(a.code, b.code) << args;
    EXPECT_EQ(a.out, b.out) << args;
    EXPECT_FALSE(a.out.empty()) << args;
  }
  const std::string p1 = tmp("det1.json"), p2 = tmp("det2.json");
  ASSERT_EQ(run("construct --b primes --alpha 9/10 --depth 8 --out " + p1, "det1").code, 0);
  ASSERT_EQ(run("construct --b primes --alpha 9/10 --depth 8 --debug-linear-k-search --out " + p2, "det2").code, 0);
  auto j1 = nlohmann::ordered_json::parse(slurp(p1)), j2 = nlohmann::ordered_json::parse(slurp(p2));
  EXPECT_EQ(j1["levels"], j2["levels"]);
}

TEST(Cli, AxiomsAndProfiles) {
  auto good = run("axioms --density buck --samples 100", "ax_buck");
  EXPECT_EQ(good.code, 0);
  EXPECT_NE(good.err.find("4/4 PASS"), std::string::npos) << good.err;
  auto bad = run("axioms --density doubled --samples 100", "ax_doubled");
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("FAIL"), std::string::npos);

  auto p = run("profile --b factorial-plus-n --nmax 6", "prof_fpn");
  EXPECT_EQ(p.code, 0);
  EXPECT_EQ(nlohmann::ordered_json::parse(p.out)["verdict"], "not-small");
  auto q = run("profile --b factorials --nmax 8", "prof_facts");
  EXPECT_EQ(nlohmann::ordered_json::parse(q.out)["verdict"], "consistent-with-small");
}

TEST(Cli, TrivialTargetAndWarnings) {
  auto t = run("construct --b primes --alpha 1 --depth 5", "trivial");
  EXPECT_EQ(t.code, 0);
  EXPECT_TRUE(nlohmann::ordered_json::parse(t.out)["levels"].empty());
  std::ofstream(tmp("few.txt")) << "2\n3\n5\n7\n";
  auto w = run("construct --b pred-enum:" + tmp("few.txt") + ":10 --alpha 1/2 --depth 4", "preden");
  EXPECT_EQ(w.code, 0) << w.err;
  EXPECT_NE(w.err.find("sumdens: warning:"), std::string::npos);
  EXPECT_FALSE(nlohmann::ordered_json::parse(w.out)["exact"].get<bool>());
}
