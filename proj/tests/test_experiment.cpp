#include <doctest.h>

#include <sstream>
#include <string>

#include "rigidlab/errors.hpp"
#include "rigidlab/experiment.hpp"

using namespace rigidlab;

namespace {

ExperimentConfig make(const std::string& sub) {
  ExperimentConfig c;
  c.subcommand = sub;
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string column(const Artifact& a, std::size_t row, const std::string& name) {
  for (std::size_t i = 0; i < a.columns.size(); ++i)
    if (a.columns[i] == name) {
      std::ostringstream s;
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) s << "";
            else if constexpr (std::is_same_v<T, double>) s << format_double(v);
            else if constexpr (std::is_same_v<T, bool>) s << (v ? "true" : "false");
            else s << v;
          },
          a.rows.at(row)[i]);
      return s.str();
    }
  FAIL("no column " << name);
  return "";
}

}  // namespace

TEST_CASE("config json round trip") {
  ExperimentConfig c = make("amplify-kron");
  c.base = "h3";
  c.n = 2;
  c.samples = 17;
  c.rigidity = 96;
  c.delta = 0.25;
  const ExperimentConfig back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(back.samples == 17U);
  CHECK(back.rigidity == 96.0);

  CHECK(config_from_json(R"({"inputs": "a.mat"})").inputs == std::vector<std::string>{"a.mat"});
  CHECK_THROWS_WITH_AS(config_from_json(R"({"nope": 1})"), doctest::Contains("unknown config key"), ConfigError);
  CHECK_THROWS_WITH_AS(config_from_json(R"({"p": "three"})"), doctest::Contains("wrong type"), ConfigError);
  CHECK_THROWS_AS(config_from_json("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(config_from_json("{"), ConfigError);
}

TEST_CASE("validate") {
  CHECK_NOTHROW(validate(make("eigs")));
  CHECK_THROWS_AS(validate(make("frobnicate")), ConfigError);
  auto c = make("eigs");
  c.p = 4;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = make("eigs");
  c.format = "xml";
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.format = "mat";
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = make("rigidity");
  c.mode = "fuzzy";
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.mode = "search";
  c.rank = 2;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = make("eigs");
  c.mode = "kron";
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = make("amplify-maj");
  c.k = 3;
  c.n = 2;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = make("rank");
  c.inputs = {"a"};
  c.base = "h1";
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK(effective_format(make("gen")) == "mat");
  CHECK(effective_format(make("eigs")) == "csv");
  CHECK(effective_mode(make("rigidity")) == "boolean");
}

TEST_CASE("worked experiments") {
  auto r = make("rigidity");
  r.base = "h1";
  r.rank = 1;
  r.p = 3;
  const Artifact ra = run_experiment(r);
  REQUIRE(ra.rows.size() == 1);
  CHECK(column(ra, 0, "value") == "1");
  CHECK(column(ra, 0, "exhaustive") == "true");

  auto e = make("eigs");
  e.n = 2;
  const Artifact ea = run_experiment(e);
  REQUIRE(ea.rows.size() == 3);
  CHECK(column(ea, 0, "lambda") == "2");
  CHECK(column(ea, 1, "lambda") == "2");
  CHECK(column(ea, 2, "lambda") == "-2");
  for (std::size_t i = 0; i < 3; ++i) CHECK(column(ea, i, "difference") == "0");

  auto k = make("amplify-kron");
  k.base = "h3";
  k.n = 2;
  k.p = 3;
  k.exhaustive = true;
  const Artifact ka = run_experiment(k);
  CHECK(column(ka, 0, "theorem_bound") == "55/128");
  CHECK(std::stod(column(ka, 0, "bound_minus_best")) >= 0);
  CHECK(column(ka, 0, "difference") == "0");
  CHECK(std::stoi(column(ka, 0, "materialized_rank")) <= 17);

  auto m = make("amplify-maj");
  m.k = 1;
  m.n = 3;
  const Artifact ma = run_experiment(m);
  CHECK(column(ma, 0, "measured_error") == "1/4");
  CHECK(column(ma, 0, "difference") == "0");

  auto g = make("gen");
  g.base = "h1";
  CHECK(*run_experiment(g).matrix_text == "sign 2 2\n1 1\n1 -1\n");
}

TEST_CASE("render and determinism") {
  std::vector<ExperimentConfig> configs;
  for (const auto& s : kSubcommands) {
    auto c = make(s);
    if (s == "gen" || s == "rank" || s == "rigidity" || s == "spectral-bound" || s == "amplify-kron") c.base = "random4";
    if (s == "gen") c.format = "csv";
    if (s == "circuit-size") c.rigidity = 96;
    if (s == "obstruction") {
      c.k = 6;
      c.rank = 2;
    }
    if (s == "schedule") c.n = 1024;
    if (s == "lift") c.samples = 3;
    if (s == "amplify-maj") {
      c.k = 2;
      c.n = 5;
      c.delta = 0.1;
      c.samples = 50;
    }
    c.seed = 7;
    configs.push_back(c);
  }
  for (const auto& c : configs) {
    CAPTURE(c.subcommand);
    for (const std::string format : {"csv", "json"}) {
      auto f = c;
      f.format = format;
      const std::string one = render(run_experiment(f), format, "2000-01-01T00:00:00Z");
      const std::string two = render(run_experiment(f), format, "2001-01-01T00:00:00Z");
      CHECK(one != two);
      CHECK(strip_timestamp(one) == strip_timestamp(two));
    }
    const auto text = lines(render(run_experiment(c), "csv", "t"));
    std::size_t i = 0;
    while (i < text.size() && text[i].rfind("# ", 0) == 0) ++i;
    CHECK(i >= 6);
    REQUIRE(i < text.size());
    CHECK(text[i].find(',') != std::string::npos);
    CHECK(text.size() > i + 1);
  }
}

TEST_CASE("csv quoting and doubles") {
  Artifact a;
  a.columns = {"s", "x", "b", "empty"};
  a.rows.push_back({std::string("a,b\"c"), 0.1, true, std::monostate{}});
  const auto text = lines(render(a, "csv", "t"));
  CHECK(text.back() == "\"a,b\"\"c\",0.1,true,");
  CHECK(format_double(1.0 / 3) == "0.3333333333333333");
  CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("errors carry context") {
  auto c = make("rank");
  c.inputs = {"/no/such/file.mat"};
  CHECK_THROWS_WITH(run_experiment(c), doctest::Contains("/no/such/file.mat"));
  auto w = make("eigs");
  w.out = "/no/such/dir/out.csv";
  std::ostringstream sink;
  CHECK_THROWS_WITH(write_artifact(run_experiment(w), w, sink), doctest::Contains("/no/such/dir/out.csv"));
  auto big = make("rigidity");
  big.base = "random8";
  big.rank = 2;
  big.budget = 10;
  CHECK_THROWS_AS(run_experiment(big), CapExceeded);
}
