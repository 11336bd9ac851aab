#include "hh/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace hh {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out += ',';
    out += header[j];
  }
  out += '\n';
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out += ',';
      out += format_double(columns[j][i]);
    }
    out += '\n';
  }
  return out;
}

CsvTable to_csv(const ProfileSamples& prof) {
  CsvTable t;
  t.header = {"r", "w", "wprime"};
  t.columns = {prof.r, prof.w, prof.wprime};
  if (prof.has_logs()) {
    t.header.insert(t.header.end(), {"ln_r", "ln_w", "ln_abs_wprime"});
    t.columns.insert(t.columns.end(), {prof.log_r, prof.log_w, prof.log_abs_wprime});
  }
  return t;
}

CsvTable to_csv(const SystemProfileSamples& prof) {
  CsvTable t;
  t.header = {"r", "u1prime", "u2prime"};
  t.columns = {prof.r, prof.u1p, prof.u2p};
  if (prof.u1.size() == prof.r.size() && prof.u2.size() == prof.r.size()) {
    t.header.insert(t.header.end(), {"u1", "u2"});
    t.columns.insert(t.columns.end(), {prof.u1, prof.u2});
  }
  return t;
}

CsvTable to_csv(const Trajectory& tr) {
  CsvTable t;
  t.header = {"t", "s", "z", "ln_abs_s", "ln_abs_z"};
  t.columns.assign(5, {});
  for (const auto& x : tr.samples) {
    t.columns[0].push_back(x.t);
    t.columns[1].push_back(x.s);
    t.columns[2].push_back(x.z);
    t.columns[3].push_back(x.log_abs_s);
    t.columns[4].push_back(x.log_abs_z);
  }
  return t;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

nlohmann::json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

nlohmann::json json_number(const std::optional<double>& x) {
  if (!x) return nullptr;
  return json_number(*x);
}

nlohmann::json to_json(const SystemParams& s) {
  return {{"N", s.N}, {"p", s.p}, {"q", s.q}, {"swapped", s.swapped}};
}

nlohmann::json to_json(const ScalarParams& s) {
  return {{"N", s.N}, {"p", s.p}, {"q", s.q}, {"sigma", s.sigma}, {"eps", s.eps}};
}

nlohmann::json to_json(const SystemExponents& e) {
  return {{"q1", json_number(e.q1)},       {"q2", json_number(e.q2)},
          {"q3", json_number(e.q3)},       {"q4", json_number(e.q4)},
          {"qstar", json_number(e.qstar)}, {"N_over_Nm1", json_number(e.n_ratio)}};
}

nlohmann::json to_json(const ScalarExponents& e) {
  return {{"qc", json_number(e.qc)}, {"qS", json_number(e.qS)}, {"gamma", json_number(e.gamma)}};
}

nlohmann::json to_json(const FixedPointInfo& f) {
  nlohmann::json ev = nlohmann::json::array(), vec = nlohmann::json::array();
  for (int k = 0; k < 2; ++k) {
    ev.push_back({{"re", json_number(f.eigenvalues[k].real())},
                  {"im", json_number(f.eigenvalues[k].imag())}});
    nlohmann::json v = nlohmann::json::array();
    for (int j = 0; j < 2; ++j)
      v.push_back({{"re", json_number(f.eigenvectors[k][j].real())},
                   {"im", json_number(f.eigenvectors[k][j].imag())}});
    vec.push_back(v);
  }
  nlohmann::json co = nlohmann::json::array();
  for (auto k : f.coincident_with) co.push_back(to_string(k));
  return {{"kind", to_string(f.kind)},
          {"s", json_number(f.pos.s)},
          {"z", json_number(f.pos.z)},
          {"quadrant", f.quadrant},
          {"eigenvalues", ev},
          {"eigenvectors", vec},
          {"stability", to_string(f.stability)},
          {"defective", f.defective},
          {"coincident_with", co}};
}

nlohmann::json to_json(const RateFit& f) {
  return {{"lnC", json_number(f.lnC)},
          {"alpha", json_number(f.alpha)},
          {"beta", json_number(f.beta)},
          {"beta_fitted", f.beta_fitted},
          {"rms", json_number(f.rms)},
          {"rms_power", json_number(f.rms_power)},
          {"t_lo", json_number(f.t_lo)},
          {"t_hi", json_number(f.t_hi)},
          {"n", f.n}};
}

nlohmann::json trajectory_summary(const Trajectory& tr) {
  nlohmann::json j{{"reason", to_string(tr.reason)},
                   {"direction", tr.direction},
                   {"log_coords", tr.log_coords},
                   {"samples", tr.samples.size()}};
  if (!tr.samples.empty()) {
    j["t_min"] = json_number(tr.t_min());
    j["t_max"] = json_number(tr.t_max());
    const auto& end = tr.direction > 0 ? tr.samples.back() : tr.samples.front();
    j["end"] = {{"t", json_number(end.t)}, {"s", json_number(end.s)}, {"z", json_number(end.z)}};
  }
  j["converged_to"] = tr.converged_to ? nlohmann::json(to_string(*tr.converged_to)) : nullptr;
  nlohmann::json cl;
  const char* names[4] = {"M0", "N0", "A0", "O"};
  for (int k = 0; k < 4; ++k) cl[names[k]] = json_number(tr.closest[k]);
  j["closest"] = cl;
  return j;
}

}  // namespace hh
