// Locale-independent number formatting, CSV tables and JSON views.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hh/dynsys.hpp"
#include "hh/exponents.hpp"
#include "hh/profile.hpp"
#include "hh/ratefit.hpp"

namespace hh {

// 17 significant digits, %g style; "nan", "inf", "-inf".
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // equal lengths
  std::string str() const;
};

CsvTable to_csv(const ProfileSamples& prof);
CsvTable to_csv(const SystemProfileSamples& prof);
CsvTable to_csv(const Trajectory& tr);

void write_text(const std::string& path, const std::string& text);

nlohmann::json to_json(const SystemParams& s);
nlohmann::json to_json(const ScalarParams& s);
nlohmann::json to_json(const SystemExponents& e);
nlohmann::json to_json(const ScalarExponents& e);
nlohmann::json to_json(const FixedPointInfo& f);
nlohmann::json to_json(const RateFit& f);
nlohmann::json trajectory_summary(const Trajectory& tr);

// Finite doubles as numbers, non-finite as strings; nullopt as null.
nlohmann::json json_number(double x);
nlohmann::json json_number(const std::optional<double>& x);

}  // namespace hh
