#include <doctest.h>

#include <map>
#include <set>

#include "hh/exponents.hpp"
#include "hh/verify.hpp"

using namespace hh;

TEST_CASE("glob filter") {
  CHECK(glob_match("*", "orange.2.ii"));
  CHECK(glob_match("orange.*", "orange.gs"));
  CHECK_FALSE(glob_match("orange.*", "rose.global"));
  CHECK(glob_match("sigma?.*", "sigmap.zero"));
  CHECK_FALSE(glob_match("sigma?.*", "sigma.zero"));
  CHECK(glob_match("rose.*,white.*", "white.global"));
  CHECK(glob_match("*.global", "hypE.global"));
  CHECK_FALSE(glob_match("", "x"));
  CHECK(glob_match("a*b*c", "aXXbYYc"));
  CHECK_FALSE(glob_match("a*b*c", "aXXbYY"));
}

TEST_CASE("config overrides only the keys it names") {
  const VerifyConfig d;
  const VerifyConfig c = load_config(nlohmann::json::parse(
      R"({"filter": "link.*", "seed": 7, "tolerances": {"exponent": 0.01}})"));
  CHECK(c.filter == "link.*");
  CHECK(c.seed == 7);
  CHECK(c.tol.exponent == 0.01);
  CHECK(c.tol.limit == d.tol.limit);
  CHECK(c.sweep_seeds == d.sweep_seeds);
  CHECK(d.tol.exponent == 0.02);
  CHECK(d.tol.log_exponent == 0.05);
  CHECK(d.tol.limit == 0.01);
  CHECK(d.sweep_seeds >= 64);
  CHECK_THROWS_AS(load_config(nlohmann::json::parse(R"({"sweep_seeds": 0})")), InvalidParams);
  CHECK_THROWS_AS(load_config(nlohmann::json::array()), InvalidParams);
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), InvalidParams);
}

TEST_CASE("catalog covers every theorem") {
  const auto& cat = scenario_catalog();
  CHECK(cat.size() >= 24);
  std::set<std::string> ids, thms;
  for (const auto& s : cat) {
    CHECK(ids.insert(s.id).second);
    thms.insert(s.theorem);
  }
  for (const char* t : {"orange", "qccrit", "hypF", "rose", "white", "yellow", "hypE", "sigmap",
                        "sigman", "pegaln", "pnsigma", "regA", "locsol", "limcas", "thsou",
                        "thabs", "thmix", "thall"})
    CHECK_MESSAGE(thms.count(t) == 1, t);
  for (int n = 1; n <= 11; ++n) CHECK(ids.count("fig." + std::to_string(n)) == 1);
}

TEST_CASE("filter sigma* selects only the sigma limit cases") {
  VerifyConfig cfg;
  cfg.filter = "sigma*";
  cfg.jobs = 1;
  const VerifyReport rep = run_all(cfg);
  REQUIRE(rep.results.size() == 4);
  for (const auto& r : rep.results) {
    CHECK((r.theorem == "sigmap" || r.theorem == "sigman"));
    CHECK(r.status == Status::pass);
  }
  CHECK(rep.exit_code() == 0);
}

TEST_CASE("scenario parameters re-classify into their region") {
  const std::map<std::string, std::string> alias = {{"p=N", "Boundary_pN"},
                                                    {"sigma=-p", "Boundary_sigmaP"},
                                                    {"sigma=-N", "Boundary_sigmaN"},
                                                    {"p=N=-sigma", "Triple_pNsigma"}};
  VerifyConfig cfg;
  cfg.jobs = 1;
  const VerifyReport rep = run_all(cfg);
  int checked = 0;
  for (const auto& r : rep.results) {
    const auto& p = r.params;
    if (!p.is_object() || !p.contains("N") || r.region == "all" || r.region == "p=q") continue;
    const std::string region =
        p.contains("sigma")
            ? to_string(classify(ScalarParams{p.at("N"), p.at("p"), p.at("q"), p.at("sigma"),
                                              p.at("eps")}))
            : to_string(classify(make_system(p.at("N"), p.at("p"), p.at("q"))));
    const auto a = alias.find(r.region);
    CHECK_MESSAGE(region == (a == alias.end() ? r.region : a->second), r.id);
    ++checked;
  }
  CHECK(checked >= 40);
}

TEST_CASE("nonexistence sweeps are labelled as sampled evidence") {
  VerifyConfig cfg;
  cfg.filter = "*.nolocal,*.noexterior";
  const VerifyReport rep = run_all(cfg);
  REQUIRE(!rep.results.empty());
  for (const auto& r : rep.results) CHECK(r.sampled_evidence);
  const auto j = report_json(rep, cfg);
  for (const auto& s : j.at("scenarios")) CHECK(s.at("evidence") == "sampled evidence");
}

TEST_CASE("reports are deterministic") {
  VerifyConfig cfg;
  cfg.filter = "orange.*,pnsigma.*,link.*";
  cfg.jobs = 3;
  const std::string a = report_json(run_all(cfg), cfg).dump();
  cfg.jobs = 1;
  const std::string b = report_json(run_all(cfg), cfg).dump();
  CHECK(a == b);
  cfg.seed += 1;
  const auto j = report_json(run_all(cfg), cfg);
  CHECK(j.at("summary").at("fail") == 0);
}

TEST_CASE("corrupted exponent tolerance fails and sets the exit code") {
  VerifyConfig cfg;
  cfg.filter = "orange.*";
  cfg.tol.exponent = 1e-12;
  const VerifyReport rep = run_all(cfg);
  CHECK(rep.failed > 0);
  CHECK(rep.exit_code() == 1);
  cfg.tol = Tolerances{};
  CHECK(run_all(cfg).exit_code() == 0);
  cfg.filter = "no.such.scenario";
  CHECK(run_all(cfg).exit_code() == 1);
}

TEST_CASE("summary round trip through report.json") {
  VerifyConfig cfg;
  cfg.filter = "link.*";
  const VerifyReport rep = run_all(cfg);
  const std::string direct = summary_text(rep);
  const std::string again = summarize_report_json(report_json(rep, cfg));
  CHECK(direct == again);
  CHECK(again.find("4 scenarios: 4 pass, 0 fail, 0 inconclusive") != std::string::npos);
  CHECK_THROWS_AS(summarize_report_json(nlohmann::json::object()), InvalidParams);
}
