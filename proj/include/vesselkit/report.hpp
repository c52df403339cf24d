#pragma once

#include <string>
#include <vector>

namespace vesselkit {

// Default tolerances; all residuals are relative to Frobenius norms of the
// operands involved (identity-type residuals at 1e-10, PSD slack 1e-12).
struct Tolerances {
  double identity = 1e-10;
  double psd = 1e-12;
  double rank = 1e-10;
  double commute = 1e-10;

  Tolerances scaled(double factor) const {
    Tolerances t = *this;
    t.identity *= factor;
    t.psd *= factor;
    t.rank *= factor;
    t.commute *= factor;
    return t;
  }
};

struct ConditionEntry {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool redundant = false;  // reported but implied by another passing entry
  std::string note;
};

// Labelled residual list; overall pass is the conjunction of all entries.
class ConditionReport {
 public:
  void add(const std::string& name, double residual, double tolerance,
           const std::string& note = "") {
    entries_.push_back(
        {name, residual, tolerance, residual <= tolerance, false, note});
  }

  void add_flag(const std::string& name, bool pass,
                const std::string& note = "") {
    entries_.push_back({name, pass ? 0.0 : 1.0, 0.5, pass, false, note});
  }

  void mark_last_redundant() {
    if (!entries_.empty()) entries_.back().redundant = true;
  }

  void mark_redundant(std::size_t index) {
    if (index < entries_.size()) entries_[index].redundant = true;
  }

  void merge(const ConditionReport& other, const std::string& prefix = "") {
    for (const auto& e : other.entries_) {
      ConditionEntry copy = e;
      copy.name = prefix.empty() ? e.name : prefix + "." + e.name;
      entries_.push_back(copy);
    }
  }

  bool pass() const {
    for (const auto& e : entries_)
      if (!e.pass) return false;
    return true;
  }

  double worst_residual() const {
    double worst = 0.0;
    for (const auto& e : entries_) worst = std::max(worst, e.residual);
    return worst;
  }

  const ConditionEntry* find(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.name == name) return &e;
    return nullptr;
  }

  const std::vector<ConditionEntry>& entries() const { return entries_; }

 private:
  std::vector<ConditionEntry> entries_;
};

}  // namespace vesselkit
