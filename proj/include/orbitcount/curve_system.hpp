#pragma once

// Weighted curve systems: the computable stand-in for a compactly supported
// geodesic current.  Components are pairwise distinct canonical cyclic words
// with positive weights; peripheral classes are rejected.

#include <map>
#include <string>
#include <vector>

#include "orbitcount/words.hpp"

namespace orbitcount {

inline bool is_peripheral_class(const GroupPresentation& pres, const CyclicWord& w) {
  if (pres.closed()) return false;
  auto [root, power] = w.primitive_root();
  (void)power;
  CyclicWord root_class = CyclicWord::canonical(pres, root);
  for (const Word& p : pres.peripheral_words()) {
    if (CyclicWord::canonical(pres, p) == root_class) return true;
  }
  return false;
}

class WeightedCurveSystem {
 public:
  WeightedCurveSystem() = default;

  explicit WeightedCurveSystem(GroupPresentation pres) : pres_(std::move(pres)) {}

  static WeightedCurveSystem of(const GroupPresentation& pres,
                                const std::vector<std::pair<Word, double>>& raw) {
    WeightedCurveSystem s(pres);
    for (const auto& [w, weight] : raw) s.add(w, weight);
    return s;
  }

  void add(const Word& raw, double weight) {
    if (weight <= 0) throw precondition_error("curve weights must be positive");
    CyclicWord c = CyclicWord::canonical(pres_, raw);
    if (is_peripheral_class(pres_, c))
      throw precondition_error("peripheral components are excluded from curve systems");
    add_canonical(std::move(c), weight);
  }

  void add_canonical(CyclicWord c, double weight) {
    for (auto& [comp, wt] : components_) {
      if (comp == c) {
        wt += weight;
        return;
      }
    }
    components_.emplace_back(std::move(c), weight);
    std::sort(components_.begin(), components_.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
  }

  const GroupPresentation& presentation() const { return pres_; }
  const std::vector<std::pair<CyclicWord, double>>& components() const { return components_; }
  bool empty() const { return components_.empty(); }
  std::size_t size() const { return components_.size(); }

  WeightedCurveSystem scaled(double t) const {
    if (t <= 0) throw precondition_error("scaling factor must be positive");
    WeightedCurveSystem s(pres_);
    for (const auto& [c, w] : components_) s.components_.emplace_back(c, w * t);
    return s;
  }

  bool operator==(const WeightedCurveSystem& o) const { return components_ == o.components_; }

  // Canonical key for orbit deduplication: weights are printed with a fixed
  // format so equal systems serialize identically.
  std::string key() const {
    std::string out;
    char buf[40];
    for (const auto& [c, w] : components_) {
      std::snprintf(buf, sizeof buf, "%.9g:", w);
      out += buf;
      for (Letter x : c.letters()) out += static_cast<char>('0' + x);
      out += ';';
    }
    return out;
  }

  std::string format() const {
    std::string out;
    char buf[40];
    for (const auto& [c, w] : components_) {
      if (!out.empty()) out += '\n';
      std::snprintf(buf, sizeof buf, "%.9g", w);
      out += buf;
      out += ':';
      out += pres_.format_word(c.letters());
    }
    return out;
  }

  // Parse "weight:word" lines.
  static WeightedCurveSystem parse(const GroupPresentation& pres, const std::string& text) {
    WeightedCurveSystem s(pres);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      auto colon = line.find(':');
      if (colon == std::string::npos) throw config_error("curve line needs 'weight:word': " + line);
      double w = 0;
      try {
        w = std::stod(line.substr(0, colon));
      } catch (const std::exception&) {
        throw config_error("bad weight in curve line: " + line);
      }
      s.add(pres.parse_word(line.substr(colon + 1)), w);
    }
    return s;
  }

 private:
  GroupPresentation pres_;
  std::vector<std::pair<CyclicWord, double>> components_;
};

}  // namespace orbitcount
