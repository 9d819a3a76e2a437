#pragma once

// Verification report: a flat list of check rows, serializable to JSON.

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

namespace gravfact {

struct CheckRow {
  std::string id;
  std::string description;
  std::string anchor;  // short identity string this check certifies
  double residual = 0.0;
  double tolerance = 0.0;
  double scale = 1.0;
  bool pass = false;
};

struct VerificationReport {
  std::string suite;
  std::vector<CheckRow> rows;

  void add(std::string id, std::string description, std::string anchor, double residual,
           double tolerance, double scale = 1.0) {
    CheckRow r;
    r.id = std::move(id);
    r.description = std::move(description);
    r.anchor = std::move(anchor);
    r.residual = residual;
    r.tolerance = tolerance;
    r.scale = scale;
    r.pass = residual <= tolerance * scale;
    rows.push_back(std::move(r));
  }

  void addRow(CheckRow r) { rows.push_back(std::move(r)); }

  void sortById() {
    std::sort(rows.begin(), rows.end(),
              [](const CheckRow& a, const CheckRow& b) { return a.id < b.id; });
  }

  bool allPass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }

  void merge(const VerificationReport& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  }

  nlohmann::json toJson() const {
    nlohmann::json out;
    out["suite"] = suite;
    out["pass"] = allPass();
    out["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
      out["rows"].push_back({{"id", r.id},
                             {"description", r.description},
                             {"anchor", r.anchor},
                             {"residual", r.residual},
                             {"tolerance", r.tolerance},
                             {"scale", r.scale},
                             {"pass", r.pass}});
    }
    return out;
  }
};

}  // namespace gravfact
