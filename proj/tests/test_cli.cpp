#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stablab/cli/experiment.hpp"
#include "stablab/cli/learner_spec.hpp"
#include "stablab/error.hpp"

using namespace stablab;
using namespace stablab::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() : path(std::filesystem::temp_directory_path() / "stablab-cli-test") {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("spec calls parse nested arguments") {
    const SpecCall call = parse_call("boost(inner=cube(d=3,eps=0.1), rho=0.3, eps=0.1)");
    CHECK(call.name == "boost");
    CHECK(call.args.at("inner") == "cube(d=3,eps=0.1)");
    CHECK(call.args.at("rho") == "0.3");
    CHECK(parse_call("erm").args.empty());
    CHECK(parse_call("random(50, 7)").args.at("#1") == "7");
    CHECK_THROWS_AS(parse_call("cube(d=3"), ConfigError);
    CHECK_THROWS_AS(parse_call("cube(d=3,d=4)"), ConfigError);
  }

  TEST_CASE("class and learner specs") {
    CHECK(load_class("cube:3").size() == 8);
    CHECK(load_class("thresholds:5").size() == 5);
    CHECK(load_class("singletons:4").size() == 4);
    CHECK_THROWS_AS(load_class("spheres:3"), ConfigError);
    CHECK_THROWS_AS(load_class("/nonexistent/class.json"), ConfigError);

    const auto cube = std::optional<ConceptClass>(make_cube(3));
    CHECK(make_learner("cube(d=3,eps=0.1)", std::nullopt).name() == "cube");
    CHECK(make_learner("thresholds(t=8,eps=0.1)", std::nullopt).name() == "thresholds");
    CHECK(make_learner("erm", cube).name() == "erm");
    CHECK(make_learner("erm-emp(eps=0.05,delta=0.02)", cube).name() == "empirical(erm)");
    CHECK(make_learner("empirical(inner=cube(d=3,eps=0.1),eps=0.1,delta=0.05)", cube).name() == "empirical(cube)");
    CHECK(make_learner("boost(inner=cube(d=3,eps=0.1),rho=0.3,eps=0.1,delta=0.05)", cube).name() == "boost(cube)");
    CHECK(make_learner("fixed(law=+++:0.5|---:0.5)", cube).name() == "fixed-law");
    CHECK(make_learner("coloring(n=5)", cube).deterministic());
    CHECK_THROWS_AS(make_learner("erm", std::nullopt), ConfigError);
    CHECK_THROWS_AS(make_learner("wizard", cube), ConfigError);
    try {
      make_learner("cube(d=3,epsilon=0.1)", std::nullopt);
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("epsilon") != std::string::npos);
      CHECK(e.module() == "cli");
    }
    CHECK_THROWS_AS(make_learner("cube(d=three,eps=0.1)", std::nullopt), ConfigError);
  }

  TEST_CASE("random realizable distributions") {
    const ConceptClass c = make_cube(3);
    const auto a = random_realizable_distributions(c, 50, 7);
    const auto b = random_realizable_distributions(c, 50, 7);
    REQUIRE(a.size() == 50);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(is_realizable(a[i], c));
      CHECK(tv_distance(a[i], b[i]) == 0.0);
      double total = 0.0;
      for (PointIndex x = 0; x < 3; ++x) total += a[i].point_mass(x);
      CHECK(std::abs(total - 1.0) <= 1e-9);
    }
    const auto t = random_realizable_distributions(make_thresholds(8), 20, 3);
    for (const auto& d : t) CHECK(is_realizable(d, make_thresholds(8)));
  }

  TEST_CASE("dims row for thresholds") {
    const Run r = run({"dims", "--class", "thresholds:5"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("# stability-lab dims report v1; columns: ", 0) == 0);
    CHECK(r.out.find("\nthresholds:5,4,5,1,2,2\n") != std::string::npos);
  }

  TEST_CASE("estimate reports are byte-identical across runs and thread counts") {
    TempDir dir;
    {
      std::ofstream f(dir.file("dist.json"));
      f << R"({"atoms": [{"x": "1", "y": 1, "p": 0.5}, {"x": "2", "y": -1, "p": 0.3}, {"x": "3", "y": 1, "p": 0.2}]})";
    }
    auto estimate = [&](const std::string& prefix, const std::string& threads) {
      return run({"estimate", "--learner", "cube(d=3,eps=0.1)", "--class", "cube:3", "--dist", dir.file("dist.json"),
                  "--n", "2000", "--trials", "500", "--seed", "7", "--threads", threads, "--out", dir.file(prefix)});
    };
    REQUIRE(estimate("a", "1").code == kExitOk);
    REQUIRE(estimate("b", "1").code == kExitOk);
    REQUIRE(estimate("c", "3").code == kExitOk);
    CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
    CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));
    CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("c.csv")));
    CHECK(slurp(dir.file("a.json")) == slurp(dir.file("c.json")));
    const std::string csv = slurp(dir.file("a.csv"));
    CHECK(csv.find("learner,distribution,n,trials,rho_hat,collision_hat,ci,modal_id\n") != std::string::npos);
  }

  TEST_CASE("exit codes") {
    CHECK(run({"estimate", "--learner", "erm", "--class", "cube:2", "--dist", "random(2,1)"}).code == kExitConfig);
    CHECK(run({"dims", "--class", "cube:17"}).code == kExitSize);
    CHECK(run({"dims", "--class", "nothing:3"}).code == kExitConfig);
    CHECK(run({"oracle", "--learner", "erm", "--class", "cube:2", "--dist", "random(1,1)", "--n", "40"}).code ==
          kExitSize);
    const Run unconverged = run({"adversary", "--class", "cube:3", "--learner", "erm-emp(eps=0.05,delta=0.02)",
                                 "--tol", "0.000001", "--max-sweeps", "1", "--trials", "300", "--seed", "7"});
    CHECK(unconverged.code == kExitUnconverged);
    const Run bad = run({"estimate", "--learner", "cube(d=3,eps=2)", "--class", "cube:3", "--dist", "random(1,1)",
                         "--seed", "1"});
    CHECK(bad.code == kExitConfig);
    CHECK(bad.err.find("learners") != std::string::npos);
  }

  TEST_CASE("oracle reports the sandwich quantities") {
    const Run r = run({"oracle", "--learner", "erm", "--class", "cube:2", "--dist", "random(1,5)", "--n", "4"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("distribution,hypothesis,probability") != std::string::npos);
  }

  TEST_CASE("experiment files drive the same pipelines") {
    TempDir dir;
    {
      std::ofstream f(dir.file("config.json"));
      f << R"json({"command": "estimate", "class": "thresholds:8", "learner": "thresholds(t=8,eps=0.1)",
               "dist": "random(3,2)", "n": 300, "trials": 200, "seed": 11})json";
    }
    const Run a = run({"experiment", dir.file("config.json"), "--out", dir.file("x")});
    REQUIRE(a.code == kExitOk);
    const Run b = run({"estimate", "--class", "thresholds:8", "--learner", "thresholds(t=8,eps=0.1)", "--dist",
                       "random(3,2)", "--n", "300", "--trials", "200", "--seed", "11", "--out", dir.file("y")});
    REQUIRE(b.code == kExitOk);
    CHECK(slurp(dir.file("x.csv")) == slurp(dir.file("y.csv")));
    CHECK(slurp(dir.file("x.json")) == slurp(dir.file("y.json")));

    {
      std::ofstream f(dir.file("bad.json"));
      f << R"json({"command": "estimate", "colour": "blue"})json";
    }
    CHECK(run({"experiment", dir.file("bad.json")}).code == kExitConfig);
  }

  TEST_CASE("adversary writes a certificate") {
    TempDir dir;
    const Run r = run({"adversary", "--class", "cube:3", "--learner", "erm-emp(eps=0.05,delta=0.02)", "--tol", "0.02",
                       "--seed", "7", "--out", dir.file("adv")});
    REQUIRE(r.code == kExitOk);
    const Json j = Json::parse(slurp(dir.file("adv.json")));
    CHECK(j["certificate"]["status"] == "converged");
    CHECK(j["certificate"]["max_frequency"].get<double>() <= 1.0 / 3.0 + 0.05);
  }
}
