#include "hh/verify.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "hh/exponents.hpp"

namespace hh {

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

template <class T>
void get_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

bool glob_one(const char* p, const char* pe, const char* t, const char* te) {
  // Iterative matcher with single backtrack point for '*'.
  const char *star = nullptr, *mark = nullptr;
  while (t != te) {
    if (p != pe && (*p == '?' || *p == *t)) {
      ++p;
      ++t;
    } else if (p != pe && *p == '*') {
      star = p++;
      mark = t;
    } else if (star) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p != pe && *p == '*') ++p;
  return p == pe;
}

bool ok_rel(double v, double e, double tol, double floor) {
  return std::isfinite(v) && std::abs(v - e) <= tol * std::max(std::abs(e), floor);
}

}  // namespace

VerifyConfig load_config(const nlohmann::json& j, VerifyConfig base) {
  if (!j.is_object()) throw InvalidParams("verify config must be a JSON object");
  get_if(j, "filter", base.filter);
  get_if(j, "output_dir", base.output_dir);
  get_if(j, "jobs", base.jobs);
  get_if(j, "seed", base.seed);
  get_if(j, "sweep_seeds", base.sweep_seeds);
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    get_if(t, "exponent", base.tol.exponent);
    get_if(t, "log_exponent", base.tol.log_exponent);
    get_if(t, "limit", base.tol.limit);
    get_if(t, "residual", base.tol.residual);
    get_if(t, "residual_fd", base.tol.residual_fd);
    get_if(t, "fixed_point", base.tol.fixed_point);
    get_if(t, "window_stability", base.tol.window_stability);
  }
  if (base.sweep_seeds < 1) throw InvalidParams("sweep_seeds must be positive");
  return base;
}

VerifyConfig load_config_file(const std::string& path, VerifyConfig base) {
  std::ifstream f(path);
  if (!f) throw InvalidParams("cannot read config file " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParams("config file " + path + " is not valid JSON: " + e.what());
  }
  return load_config(j, base);
}

bool glob_match(const std::string& pattern, const std::string& text) {
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = pattern.find(',', start);
    const std::size_t end = comma == std::string::npos ? pattern.size() : comma;
    if (glob_one(pattern.data() + start, pattern.data() + end, text.data(),
                 text.data() + text.size()))
      return true;
    if (comma == std::string::npos) return false;
    start = comma + 1;
  }
}

void Context::add(Metric m) { res_.metrics.push_back(std::move(m)); }

bool Context::expect_rel(const std::string& name, double value, double expected, double tol,
                         double floor) {
  const bool ok = ok_rel(value, expected, tol, floor);
  add({name, value, expected, tol, ok, false, "relative"});
  return ok;
}

bool Context::expect_abs(const std::string& name, double value, double expected, double tol) {
  const bool ok = std::isfinite(value) && std::abs(value - expected) <= tol;
  add({name, value, expected, tol, ok, false, "absolute"});
  return ok;
}

bool Context::expect_lt(const std::string& name, double value, double bound) {
  const bool ok = std::isfinite(value) && value < bound;
  add({name, value, bound, bound, ok, false, "upper bound"});
  return ok;
}

bool Context::expect_true(const std::string& name, bool cond, const std::string& note) {
  add({name, cond ? 1.0 : 0.0, 1.0, 0.0, cond, false, note});
  return cond;
}

void Context::info(const std::string& name, double value, const std::string& note) {
  add({name, value, 0, 0, true, true, note});
}

void Context::artifact(const std::string& name, const CsvTable& table) {
  tables_.emplace_back(name, table);
}

void Context::inconclusive(const std::string& why) {
  inconclusive_ = true;
  diag("inconclusive: " + why);
}

ScenarioResult run_scenario(const Scenario& sc, const VerifyConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Context ctx(cfg, cfg.seed ^ fnv1a(sc.id));
  bool failed_by_exception = false;
  try {
    sc.run(ctx);
  } catch (const InvalidParams& e) {
    ctx.inconclusive(e.what());
  } catch (const std::exception& e) {
    ctx.diag(std::string("error: ") + e.what());
    failed_by_exception = true;
  }
  ScenarioResult res = std::move(ctx.result());
  res.id = sc.id;
  res.theorem = sc.theorem;
  res.region = sc.region;
  bool any_fail = failed_by_exception;
  for (const auto& m : res.metrics) any_fail = any_fail || !m.ok;
  res.status = any_fail ? Status::fail
               : ctx.flagged_inconclusive() ? Status::inconclusive
                                            : Status::pass;
  if (res.metrics.empty() && res.status == Status::pass) {
    res.status = Status::inconclusive;
    res.diagnostics.push_back("inconclusive: no checks were recorded");
  }

  if (!cfg.output_dir.empty()) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(cfg.output_dir) / sc.id;
    for (const auto& [name, table] : ctx.tables()) {
      fs::create_directories(dir);
      const fs::path file = dir / (name + ".csv");
      write_text(file.string(), table.str());
      res.artifacts.push_back((fs::path(sc.id) / (name + ".csv")).generic_string());
    }
  }
  res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

VerifyReport run_all(const VerifyConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<const Scenario*> todo;
  for (const auto& sc : scenario_catalog())
    if (glob_match(cfg.filter, sc.id)) todo.push_back(&sc);

  VerifyReport rep;
  rep.results.resize(todo.size());
  unsigned jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, std::max<std::size_t>(1, todo.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < todo.size();)
      rep.results[i] = run_scenario(*todo[i], cfg);
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (const auto& r : rep.results) {
    rep.passed += r.status == Status::pass;
    rep.failed += r.status == Status::fail;
    rep.inconclusive += r.status == Status::inconclusive;
  }
  rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    const std::string base = cfg.output_dir + "/";
    write_text(base + "report.json", report_json(rep, cfg).dump(2) + "\n");
    write_text(base + "summary.txt", summary_text(rep));
  }
  return rep;
}

nlohmann::json report_json(const VerifyReport& rep, const VerifyConfig& cfg) {
  nlohmann::json sc = nlohmann::json::array();
  for (const auto& r : rep.results) {
    nlohmann::json ms = nlohmann::json::array();
    for (const auto& m : r.metrics) {
      nlohmann::json jm{{"name", m.name}, {"value", json_number(m.value)}, {"ok", m.ok}};
      if (m.informational) {
        jm["informational"] = true;
      } else {
        jm["expected"] = json_number(m.expected);
        jm["tolerance"] = json_number(m.tolerance);
      }
      if (!m.note.empty()) jm["note"] = m.note;
      ms.push_back(std::move(jm));
    }
    sc.push_back({{"id", r.id},
                  {"theorem", r.theorem},
                  {"region", r.region},
                  {"status", to_string(r.status)},
                  {"evidence", r.sampled_evidence ? "sampled evidence" : "constructive"},
                  {"params", r.params.is_null() ? nlohmann::json::object() : r.params},
                  {"metrics", ms},
                  {"artifacts", r.artifacts},
                  {"diagnostics", r.diagnostics}});
  }
  const Tolerances& t = cfg.tol;
  return {{"config",
           {{"filter", cfg.filter},
            {"seed", cfg.seed},
            {"sweep_seeds", cfg.sweep_seeds},
            {"tolerances",
             {{"exponent", t.exponent},
              {"log_exponent", t.log_exponent},
              {"limit", t.limit},
              {"residual", t.residual},
              {"residual_fd", t.residual_fd},
              {"fixed_point", t.fixed_point},
              {"window_stability", t.window_stability}}}}},
          {"summary",
           {{"total", rep.results.size()},
            {"pass", rep.passed},
            {"fail", rep.failed},
            {"inconclusive", rep.inconclusive}}},
          {"scenarios", sc}};
}

namespace {

std::string line_for(const std::string& id, const std::string& status, const std::string& thm,
                     bool sampled) {
  std::ostringstream o;
  o << status;
  for (std::size_t k = status.size(); k < 13; ++k) o << ' ';
  o << id;
  for (std::size_t k = id.size(); k < 28; ++k) o << ' ';
  o << thm;
  if (sampled) o << "  [sampled evidence]";
  o << '\n';
  return o.str();
}

}  // namespace

std::string summary_text(const VerifyReport& rep) {
  std::string out;
  for (const auto& r : rep.results) {
    out += line_for(r.id, to_string(r.status), r.theorem, r.sampled_evidence);
    if (r.status == Status::pass) continue;
    for (const auto& m : r.metrics)
      if (!m.ok)
        out += "    " + m.name + " = " + format_double(m.value) + ", expected " +
               format_double(m.expected) + " (tol " + format_double(m.tolerance) + ")\n";
    for (const auto& d : r.diagnostics) out += "    " + d + "\n";
  }
  out += std::to_string(rep.results.size()) + " scenarios: " + std::to_string(rep.passed) +
         " pass, " + std::to_string(rep.failed) + " fail, " + std::to_string(rep.inconclusive) +
         " inconclusive\n";
  return out;
}

std::string summarize_report_json(const nlohmann::json& j) {
  if (!j.contains("scenarios") || !j.at("scenarios").is_array())
    throw InvalidParams("report has no scenarios array");
  std::string out;
  int counts[3] = {0, 0, 0};
  for (const auto& s : j.at("scenarios")) {
    const std::string st = s.value("status", "?");
    counts[0] += st == "pass";
    counts[1] += st == "fail";
    counts[2] += st == "inconclusive";
    out += line_for(s.value("id", "?"), st, s.value("theorem", ""),
                    s.value("evidence", "") == "sampled evidence");
    if (st == "pass") continue;
    for (const auto& m : s.value("metrics", nlohmann::json::array()))
      if (!m.value("ok", true)) out += "    " + m.value("name", "?") + " " + m.dump() + "\n";
  }
  out += std::to_string(j.at("scenarios").size()) + " scenarios: " + std::to_string(counts[0]) +
         " pass, " + std::to_string(counts[1]) + " fail, " + std::to_string(counts[2]) +
         " inconclusive\n";
  return out;
}

}  // namespace hh
