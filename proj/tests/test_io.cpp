#include <doctest.h>

#include <clocale>
#include <filesystem>
#include <random>

#include "kinex/error.hpp"
#include "kinex/io.hpp"

using namespace kinex;

namespace {

std::string parse_failure(const std::string& text) {
  try {
    (void)io::parse_grid_config(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

}  // namespace

TEST_CASE("number formatting is shortest round-trip and locale independent") {
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(1.0) == "1");
  CHECK(io::format_number(-0.0) == "0");
  CHECK(io::format_number(1e-300) == "1e-300");
  CHECK(io::format_number(std::uint64_t{18446744073709551615ULL}) == "18446744073709551615");

  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double v = d(gen);
    REQUIRE(io::parse_number(io::format_number(v), "t") == v);
  }
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8")) {
    CHECK(io::format_number(0.25) == "0.25");
    std::setlocale(LC_NUMERIC, "C");
  }
}

TEST_CASE("csv parsing") {
  const auto t = io::parse_csv("a,b\n1,2\r\n3,\n");
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][1].empty());
  CHECK(*t.column("b") == 1);
  CHECK(!t.column("c"));
  CHECK(t.to_string() == "a,b\n1,2\n3,\n");
  CHECK_THROWS_AS(io::parse_csv("a,b\n1\n"), Error);
  CHECK_THROWS_AS(io::parse_csv(""), Error);
  CHECK_THROWS_AS(io::parse_number("1.5x", "here"), Error);
}

TEST_CASE("grid config parsing") {
  const SweepGrid nx = io::parse_grid_config(
      R"({"model":"nx","n":1000,"t_max":1000000,"master_seed":7,"lambda":[0.25],"gamma":[0.5]})");
  CHECK(nx.model == ModelKind::Nx);
  CHECK(nx.points().size() == 1);
  CHECK(nx.replicates == 1);
  CHECK(nx.master_seed == 7);

  const std::string both = parse_failure(
      R"({"model":"nx","n":10,"t_max":10,"master_seed":1,"lambda":[0.2],"xi":[0.1],"gamma":[0.5]})");
  CHECK(both.rfind("xi", 0) == 0);

  const std::string bad_lambda = parse_failure(
      R"({"model":"nx","n":10,"t_max":10,"master_seed":1,"lambda":["x"],"gamma":[0.5]})");
  CHECK(bad_lambda.rfind("lambda[0]", 0) == 0);

  CHECK(parse_failure(R"({"model":"nx","n":10,"t_max":10,"master_seed":1,"lambda":[0.2],"gamma":[0.5],"extra":1})")
            .rfind("extra", 0) == 0);
  CHECK(parse_failure(R"({"model":"ex","n":10,"t_max":10,"master_seed":1,"lambda":[0.2],"xi":[1.5],"tp":[10]})")
            .rfind("xi[0]", 0) == 0);
  CHECK(parse_failure(R"({"model":"ex","n":10,"t_max":10,"master_seed":1,"lambda":[0.2],"xi":[0.5],"tp":[0]})")
            .rfind("tp[0]", 0) == 0);
  CHECK(parse_failure(R"({"model":"ex","n":10,"t_max":10,"master_seed":1,"lambda":[0.2],"xi":[0.5]})")
            .rfind("tp", 0) == 0);
  CHECK(parse_failure(R"({"model":"zz","n":10,"t_max":10,"master_seed":1,"lambda":[0.2]})")
            .rfind("model", 0) == 0);
  CHECK(parse_failure("{not json").rfind("$", 0) == 0);
  CHECK(parse_failure(R"({"model":"basic","n":10,"t_max":10,"lambda":[0.2]})")
            .rfind("master_seed", 0) == 0);
}

TEST_CASE("grid config round-trips through serialization") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    SweepGrid g;
    g.model = static_cast<ModelKind>(trial % 3);
    const int len = 1 + trial % 4;
    for (int k = 0; k < len; ++k) g.lambda.push_back(unit(gen));
    if (g.model == ModelKind::Ex) {
      for (int k = 0; k < len; ++k) g.xi.push_back(unit(gen));
      g.tp = {1, static_cast<std::uint64_t>(1 + gen() % 100000)};
    }
    if (g.model == ModelKind::Nx) {
      for (int k = 0; k < len; ++k) g.gamma.push_back(unit(gen));
    }
    g.replicates = 1 + gen() % 20;
    g.n_agents = 2 + gen() % 5000;
    g.t_max = 1 + gen() % 10'000'000;
    g.master_seed = gen();
    g.initial_wealth = 0.5 + unit(gen);
    REQUIRE(io::parse_grid_config(io::serialize_grid(g)) == g);
  }
}

TEST_CASE("sweep csv round-trips") {
  std::vector<SweepRow> rows(3);
  rows[0].model = ModelSpec::ex(0.25, 0.5, 2500);
  rows[0].g = 0.4;
  rows[0].f = 0.5;
  rows[0].f_over_g = 1.25;
  rows[0].seed = 123456789012345ULL;
  rows[1] = rows[0];
  rows[1].replicate = 1;
  rows[2].model = ModelSpec::ex(0.5, 0.5, 2500);
  rows[2].point = 1;
  rows[2].g = 0.0;
  const std::string text = io::sweep_csv(rows);
  CHECK(text.rfind("model,lambda,xi,tp,gamma,x_ex,x_nx,replicate,seed,g,f,f_over_g\n", 0) == 0);
  CHECK(text.back() == '\n');
  CHECK(text.substr(text.size() - 2) != "\n\n");
  const auto back = io::parse_sweep_csv(io::parse_csv(text));
  REQUIRE(back.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(back[k].model == rows[k].model);
    CHECK(back[k].point == rows[k].point);
    CHECK(back[k].replicate == rows[k].replicate);
    CHECK(back[k].seed == rows[k].seed);
    CHECK(back[k].g == rows[k].g);
    CHECK(back[k].f_over_g == rows[k].f_over_g);
  }
  CHECK(io::sweep_csv(back) == text);
}

TEST_CASE("sha256 and manifests") {
  CHECK(io::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(io::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");

  const auto dir = std::filesystem::temp_directory_path() / "kinex_io_test";
  std::filesystem::remove_all(dir);
  io::OutputSet out(dir);
  out.add("a.csv", "x\n1\n");
  CHECK(!std::filesystem::exists(dir));
  out.commit({{"k", 1}}, io::utc_timestamp());
  CHECK(io::read_file(dir / "a.csv") == "x\n1\n");
  CHECK(!std::filesystem::exists(dir / "a.csv.tmp"));
  const auto manifest = nlohmann::json::parse(io::read_file(dir / "manifest.json"));
  CHECK(manifest["files"][0]["name"] == "a.csv");
  CHECK(manifest["files"][0]["sha256"] == io::sha256_hex("x\n1\n"));
  CHECK(manifest["config"]["k"] == 1);
  CHECK(manifest["rng"] == kRngName);
  std::filesystem::remove_all(dir);
}
