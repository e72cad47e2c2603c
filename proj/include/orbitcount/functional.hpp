#pragma once

// Positive homogeneous functionals on curve systems / multicurves: hyperbolic
// length, intersection with a fixed filling system, and the Thurston-metric
// ratio functional.

#include <memory>

#include "orbitcount/filling.hpp"
#include "orbitcount/intersection.hpp"

namespace orbitcount {

class HomogeneousFunctional {
 public:
  enum class Kind { length, intersect, thurston_ratio };

  static HomogeneousFunctional length(Holonomy X) {
    HomogeneousFunctional f;
    f.kind_ = Kind::length;
    f.X_ = std::make_shared<Holonomy>(std::move(X));
    f.name_ = "length";
    return f;
  }

  // requires alpha filling; certified through the complementary-region test
  static HomogeneousFunctional intersect(Holonomy X, WeightedCurveSystem alpha,
                                         long long filling_bound = 6) {
    auto verdict = is_filling(X, alpha, filling_bound);
    if (verdict.verdict == FillingVerdict::not_filling)
      throw positivity_error("intersection functional needs a filling system; witness " +
                             (verdict.witness ? verdict.witness->format() : std::string("none")));
    if (verdict.verdict == FillingVerdict::unknown)
      throw positivity_error("filling certificate inconclusive for the intersection functional");
    HomogeneousFunctional f;
    f.kind_ = Kind::intersect;
    f.X_ = std::make_shared<Holonomy>(std::move(X));
    f.alpha_ = std::make_shared<WeightedCurveSystem>(std::move(alpha));
    f.intersector_ = std::make_shared<Intersector>(*f.X_);
    f.name_ = "intersect";
    return f;
  }

  static HomogeneousFunctional thurston_ratio(Holonomy X, long long curve_bound) {
    HomogeneousFunctional f;
    f.kind_ = Kind::thurston_ratio;
    f.X_ = std::make_shared<Holonomy>(std::move(X));
    f.intersector_ = std::make_shared<Intersector>(*f.X_);
    f.curve_bound_ = curve_bound;
    auto probes = std::make_shared<std::vector<std::pair<WeightedCurveSystem, double>>>();
    enumerate_multicurves(f.X_->presentation().signature(), curve_bound, [&](const DTCoordinates& c) {
      WeightedCurveSystem mu = dt_to_system(f.X_->presentation(), c);
      probes->emplace_back(mu, f.X_->liouville_intersection(mu));
    });
    f.ratio_probes_ = std::move(probes);
    f.name_ = "thurston_ratio";
    return f;
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const Holonomy& surface() const { return *X_; }
  const GroupPresentation& presentation() const { return X_->presentation(); }

  double operator()(const WeightedCurveSystem& sys) const {
    double value = 0;
    switch (kind_) {
      case Kind::length:
        value = X_->liouville_intersection(sys);
        break;
      case Kind::intersect:
        value = intersector_->pairing(*alpha_, sys);
        break;
      case Kind::thurston_ratio: {
        for (const auto& [mu, lmu] : *ratio_probes_)
          value = std::max(value, intersector_->pairing(mu, sys) / lmu);
        break;
      }
    }
    if (!(value > 0))
      throw positivity_error("functional vanished on a nonzero system; positivity precondition violated");
    return value;
  }

 private:
  Kind kind_ = Kind::length;
  std::string name_;
  std::shared_ptr<Holonomy> X_;
  std::shared_ptr<WeightedCurveSystem> alpha_;
  std::shared_ptr<Intersector> intersector_;
  std::shared_ptr<std::vector<std::pair<WeightedCurveSystem, double>>> ratio_probes_;
  long long curve_bound_ = 0;
};

// Evaluation on lattice points: through the realized multicurve.
inline double evaluate_functional(const HomogeneousFunctional& F, const DTCoordinates& c) {
  return F(dt_to_system(F.presentation(), c));
}

}  // namespace orbitcount
