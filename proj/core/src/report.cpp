#include "relgeo/report.hpp"

#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace relgeo {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

double AlphaReport::value(int r, const std::string& key) const {
  for (const auto& e : per_radius)
    if (e.r == r) return e.measured.at(key);
  throw std::out_of_range("AlphaReport: no entry for radius " + std::to_string(r));
}

std::string AlphaReport::to_json() const {
  nlohmann::json j;
  j["condition"] = condition;
  j["params"] = params;
  auto& rows = j["per_radius"] = nlohmann::json::array();
  for (const auto& e : per_radius) {
    nlohmann::json row;
    row["r"] = e.r;
    nlohmann::json m;
    for (const auto& [k, v] : e.measured) m[k] = format_double(v);
    row["measured"] = m;
    row["witnesses"] = e.witnesses;
    row["truncated"] = e.truncated;
    row["vacuous"] = e.vacuous;
    rows.push_back(row);
  }
  j["verdict"] = verdict;
  return j.dump(2);
}

std::string AlphaReport::to_csv() const {
  std::set<std::string> keys;
  for (const auto& e : per_radius)
    for (const auto& [k, v] : e.measured) keys.insert(k);
  std::ostringstream os;
  os << "r";
  for (const auto& k : keys) os << ',' << k;
  os << ",truncated,vacuous\n";
  for (const auto& e : per_radius) {
    os << e.r;
    for (const auto& k : keys) {
      auto it = e.measured.find(k);
      os << ',' << (it == e.measured.end() ? "" : format_double(it->second));
    }
    os << ',' << (e.truncated ? 1 : 0) << ',' << (e.vacuous ? 1 : 0) << '\n';
  }
  return os.str();
}

AlphaReport merge_reports(const std::vector<AlphaReport>& reports) {
  if (reports.empty()) return {};
  AlphaReport out = reports.front();
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].condition != out.condition)
      throw std::invalid_argument("merge_reports: mixed conditions");
    for (const auto& e : reports[i].per_radius) out.per_radius.push_back(e);
  }
  return out;
}

}  // namespace relgeo
