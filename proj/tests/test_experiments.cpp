#include <doctest.h>

#include "aggnash/experiments.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace aggnash;

namespace {

ExperimentConfig small_sync() {
  ExperimentConfig c;
  c.game.players = 5;
  c.game.locations = 2;
  c.iters = 300;
  c.checkpoints = {100};
  c.sample_paths = 4;
  c.threads = 2;
  return c;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("sync run on the static complete graph") {
  const auto r = run_experiment(small_sync());
  REQUIRE(r.checkpoints.size() == 1);
  CHECK(r.checkpoints[0].iters == 100);
  CHECK(r.final.iters == 300);
  CHECK(r.final.per_path.size() == 4);
  CHECK(r.mean_error() < r.checkpoints[0].mean);
  CHECK(r.ci_width() >= 0.0);
  CHECK_FALSE(r.mixing.has_value());
}

TEST_CASE("a single path has no interval") {
  ExperimentConfig c = small_sync();
  c.sample_paths = 1;
  const auto r = run_experiment(c);
  CHECK_FALSE(r.final.ci_defined);
  CHECK(r.ci_width() == 0.0);
}

TEST_CASE("same seed, same report, regardless of threads") {
  ExperimentConfig c = small_sync();
  c.algorithm = Algorithm::gossip;
  c.stepsize.rule = StepsizeSpec::Rule::uniform_constant;
  c.iters = 2000;
  c.checkpoints = {500};
  const auto a = run_experiment(c);
  c.threads = 1;
  const auto b = run_experiment(c);
  CHECK(a.final.per_path == b.final.per_path);
  CHECK(a.checkpoints[0].per_path == b.checkpoints[0].per_path);
  REQUIRE(a.mixing.has_value());
  c.master_seed += 1;
  CHECK(run_experiment(c).final.per_path != a.final.per_path);
}

TEST_CASE("interval width uses the normal quantile") {
  const ErrorStats s = summarize(10, {1.0, 2.0, 3.0, 4.0}, 0.90);
  CHECK(s.mean == doctest::Approx(2.5));
  const double sd = std::sqrt(5.0 / 3.0);
  CHECK(s.ci_width == doctest::Approx(2 * 1.6448536269514722 * sd / 2.0).epsilon(1e-12));
}

TEST_CASE("config validation") {
  ExperimentConfig c = small_sync();
  c.topology = TopologyKind::cycle;
  CHECK_THROWS_AS(c.validate(), Error);
  c.weights = WeightRule::metropolis_half;
  CHECK_NOTHROW(c.validate());
  c.checkpoints = {1000};
  CHECK_THROWS_AS(c.validate(), Error);
  c = small_sync();
  c.algorithm = Algorithm::gossip;
  CHECK_THROWS_AS(c.validate(), Error);  // harmonic is sync-only
  c.stepsize.rule = StepsizeSpec::Rule::update_count;
  CHECK_NOTHROW(c.validate());
  c.dynamic = true;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("config JSON round trip and defaults") {
  ExperimentConfig c = small_sync();
  c.game.coupling = Relation::ge;
  const ExperimentConfig back = config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));

  const auto gossip = config_from_json(nlohmann::json::parse(R"({"algorithm": "gossip", "topology": "grid"})"));
  CHECK(gossip.stepsize.rule == StepsizeSpec::Rule::update_count);
  CHECK(gossip.stepsize.scale == 9.0);
  const auto cyc = config_from_json(nlohmann::json::parse(R"({"topology": "cycle"})"));
  CHECK(cyc.weights == WeightRule::metropolis_half);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"iterz": 5})")), Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"topology": "torus"})")), Error);
}

TEST_CASE("explicit parameters and hashing") {
  ExperimentConfig c = small_sync();
  const auto p = c.game.params();
  const auto back = params_from_json(params_to_json(p));
  CHECK(back.a == p.a);
  CHECK(back.d == p.d);
  CHECK(params_hash(back) == params_hash(p));
  auto q = p;
  q.d[0] += 1e-9;
  CHECK(params_hash(q) != params_hash(p));
  c.game.explicit_params = p;
  CHECK(params_hash(config_from_json(to_json(c)).game.params()) == params_hash(p));
}

TEST_CASE("oracle cache is used when configured") {
  ExperimentConfig c = small_sync();
  const auto dir = std::filesystem::temp_directory_path() / "aggnash_exp_cache";
  std::filesystem::remove_all(dir);
  c.oracle.cache_dir = dir.string();
  const auto params = c.game.params();
  const GameInstance g = cournot::build_game(params);
  const Profile x1 = equilibrium(c, g, params);
  CHECK(std::filesystem::exists(OracleCache(dir).path_for(c.game.seed, params_hash(params))));
  const Profile x2 = equilibrium(c, g, params);
  for (std::size_t i = 0; i < x1.size(); ++i) CHECK(x1[i] == x2[i]);
  std::filesystem::remove_all(dir);
}

TEST_CASE("concurrence") {
  ExperimentConfig c;
  c.game.players = 10;
  c.game.locations = 2;
  c.algorithm = Algorithm::gossip;
  c.stepsize.rule = StepsizeSpec::Rule::update_count;
  c.stepsize.scale = 9.0;
  c.sample_paths = 3;
  c.concurrence_budget = 100000;
  SUBCASE("vacuous threshold") {
    CHECK(concurrence_iterations(c, std::numeric_limits<double>::infinity()).iterations <= 1);
  }
  SUBCASE("complete beats cycle") {
    const auto complete = concurrence_iterations(c, 1e-3);
    c.topology = TopologyKind::cycle;
    const auto cycle = concurrence_iterations(c, 1e-3);
    CHECK(complete.censored == 0);
    CHECK(complete.iterations < cycle.iterations);
  }
  SUBCASE("sync configs are rejected") {
    c.algorithm = Algorithm::sync;
    c.stepsize.rule = StepsizeSpec::Rule::harmonic;
    CHECK_THROWS_AS(concurrence_iterations(c, 1e-3), Error);
  }
}

TEST_CASE("table emission") {
  const auto dir = std::filesystem::temp_directory_path() / "aggnash_tables";
  std::filesystem::remove_all(dir);
  SUBCASE("empty input gives header-only tables") {
    const auto files = emit_tables({}, dir);
    CHECK(files.size() >= 10);
    for (const auto& f : files) {
      if (f.extension() == ".csv") CHECK(read_csv(f).size() == 1);
    }
  }
  SUBCASE("values round trip exactly and the mixing table reports p_min/p_max") {
    ExperimentConfig c = small_sync();
    c.game.players = 20;
    c.algorithm = Algorithm::gossip;
    c.stepsize.rule = StepsizeSpec::Rule::update_count;
    c.topology = TopologyKind::wheel;
    c.iters = 500;
    c.checkpoints = {};
    c.sample_paths = 2;
    ExperimentReport r = run_experiment(c);
    r.iterations_to_concurrence = 1234;
    const auto files = emit_tables({{c, r}}, dir);
    bool found_error = false, found_mix = false;
    for (const auto& f : files) {
      if (f.extension() != ".csv") continue;
      const auto rows = read_csv(f);
      const std::string name = f.stem().string();
      if (name.ends_with("gossip_error_k500")) {
        REQUIRE(rows.size() == 2);
        const auto col = std::find(rows[0].begin(), rows[0].end(), "diminishing_wheel") - rows[0].begin();
        CHECK(std::strtod(rows[1][col].c_str(), nullptr) == r.final.mean);
        found_error = true;
      }
      if (name.find("gossip_mixing") != std::string::npos) {
        REQUIRE(rows.size() == 2);
        CHECK(rows[0][2] == "p_min/p_max");
        CHECK(std::strtod(rows[1][2].c_str(), nullptr) == doctest::Approx(1.0 / 19.0).epsilon(1e-15));
        CHECK(rows[1][5] == "1234");
        found_mix = true;
      }
    }
    CHECK(found_error);
    CHECK(found_mix);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(std::strtod(format_number(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
  const std::string t = render_aligned({{"a", "bb"}, {"ccc", "d"}});
  CHECK(t.find("ccc | d") != std::string::npos);
}
