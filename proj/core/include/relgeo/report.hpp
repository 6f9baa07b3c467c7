#pragma once

#include <map>
#include <string>
#include <vector>

namespace relgeo {

// Measurement report for one diagnostic condition; per_radius rows make the
// boundedness-in-r question inspectable. Serialization is deterministic
// (sorted keys, fixed float formatting).
struct AlphaReport {
  std::string condition;
  std::map<std::string, std::string> params;

  struct Entry {
    int r = 0;
    std::map<std::string, double> measured;
    std::vector<std::string> witnesses;
    bool truncated = false;
    bool vacuous = false;
  };
  std::vector<Entry> per_radius;
  std::string verdict = "measured";

  double value(int r, const std::string& key) const;
  std::string to_json() const;
  std::string to_csv() const;  // one row per radius, columns sorted by key
};

// Merges single-radius reports of the same condition into one sweep report.
AlphaReport merge_reports(const std::vector<AlphaReport>& reports);

std::string format_double(double v);  // fixed, trailing-zero-trimmed

}  // namespace relgeo
