#pragma once

// Exact circular order on the boundary of a free surface group (punctured
// surfaces).  Ends are eventually periodic infinite reduced words in a
// canonical (minimal preperiod, primitive period) normal form; orientation
// of an end triple reduces to the cyclic order of the letter cylinders at
// the tripod vertex, which is read off once from the holonomy's fixed
// points.  Everything downstream of that single numeric readout is integer
// combinatorics, so crossing decisions carry no tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "orbitcount/holonomy.hpp"
#include "orbitcount/words.hpp"

namespace orbitcount {

// An end: pre . per^infinity, freely reduced, with per cyclically reduced and
// primitive and pre of minimal length.  The normal form is unique.
struct Ray {
  Word pre;
  Word per;

  static Ray make(const Word& prefix, Word period) {
    if (period.empty()) throw precondition_error("ray needs a nonempty period");
    if (cyclic_reduce(period).size() != period.size())
      throw precondition_error("ray period must be cyclically reduced");
    period.resize(primitive_period(period));
    const std::size_t p = period.size();
    const std::size_t copies = prefix.size() / p + 3;
    Word w = prefix;
    for (std::size_t i = 0; i < copies; ++i) w.insert(w.end(), period.begin(), period.end());
    w = free_reduce(w);
    // locate where the periodic tail starts
    std::size_t s = w.size() - p;
    while (s > 0 && w[s - 1] == w[s - 1 + p]) --s;
    Ray r;
    r.pre.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(s));
    r.per.assign(w.begin() + static_cast<std::ptrdiff_t>(s), w.begin() + static_cast<std::ptrdiff_t>(s + p));
    // minimal preperiod
    while (!r.pre.empty() && r.pre.back() == r.per.back()) {
      std::rotate(r.per.begin(), r.per.end() - 1, r.per.end());
      r.pre.pop_back();
    }
    return r;
  }

  // fast path: junction already reduced and period already primitive and
  // cyclically reduced; only the minimal-preperiod absorption remains
  static Ray raw_periodic(Word prefix, Word period) {
    Ray r;
    r.pre = std::move(prefix);
    r.per = std::move(period);
    while (!r.pre.empty() && r.pre.back() == r.per.back()) {
      std::rotate(r.per.begin(), r.per.end() - 1, r.per.end());
      r.pre.pop_back();
    }
    return r;
  }

  Letter at(std::size_t i) const {
    return i < pre.size() ? pre[i] : per[(i - pre.size()) % per.size()];
  }

  bool operator==(const Ray& o) const { return pre == o.pre && per == o.per; }
  bool operator<(const Ray& o) const { return std::tie(pre, per) < std::tie(o.pre, o.per); }
};

inline Ray ray_apply(const Word& g, const Ray& e) { return Ray::make(concat(g, e.pre), e.per); }

// first index where two distinct ends differ; equal ends return no value
inline std::optional<std::size_t> ray_divergence(const Ray& x, const Ray& y) {
  const std::size_t bound = std::max(x.pre.size(), y.pre.size()) + x.per.size() + y.per.size() + 2;
  for (std::size_t i = 0; i < bound; ++i)
    if (x.at(i) != y.at(i)) return i;
  return std::nullopt;  // agree past both preperiods for a full joint period: equal
}

class BoundaryOrder {
 public:
  explicit BoundaryOrder(const Holonomy& X) : rank_(X.presentation().alphabet_size()) {
    if (X.presentation().closed())
      throw precondition_error("combinatorial boundary order needs a free presentation");
    const std::size_t n = rank_.size();
    std::vector<std::pair<double, std::size_t>> angles;
    for (std::size_t x = 0; x < n; ++x) {
      Mat2 m = X.generator_matrix(static_cast<unsigned>(x >> 1));
      AxisEndpoints ax = Holonomy::fixed_points(m);
      double fp = is_inverse(static_cast<Letter>(x)) ? ax.repelling : ax.attracting;
      angles.emplace_back(boundary_angle(fp), x);
    }
    std::sort(angles.begin(), angles.end());
    for (std::size_t i = 0; i + 1 < angles.size(); ++i)
      if (angles[i + 1].first - angles[i].first < 1e-9)
        throw structure_error("letter fixed points are not separated on the circle");
    for (std::size_t i = 0; i < angles.size(); ++i) rank_[angles[i].second] = static_cast<int>(i);
  }

  static double boundary_angle(double p) {
    if (std::isinf(p)) return std::arg(std::complex<double>(1.0, 0.0));
    std::complex<double> z = (std::complex<double>(p, 0) - std::complex<double>(0, 1)) /
                             (std::complex<double>(p, 0) + std::complex<double>(0, 1));
    return std::arg(z);
  }

  int rank_of(Letter x) const { return rank_.at(x); }

  // orientation of three distinct letter cylinders in the base circular order
  int or3_letters(Letter x, Letter y, Letter z) const {
    const int n = static_cast<int>(rank_.size());
    int rx = rank_[x], ry = rank_[y], rz = rank_[z];
    int dy = (ry - rx + n) % n;
    int dz = (rz - rx + n) % n;
    return dy < dz ? 1 : -1;
  }

  // orientation of three pairwise distinct ends
  int orient(const Ray& e1, const Ray& e2, const Ray& e3) const {
    auto d12 = ray_divergence(e1, e2);
    auto d13 = ray_divergence(e1, e3);
    auto d23 = ray_divergence(e2, e3);
    if (!d12 || !d13 || !d23) throw precondition_error("orient called with equal ends");
    std::size_t m = std::min({*d12, *d13, *d23});
    if (*d12 == m && *d13 == m && *d23 == m)
      return or3_letters(e1.at(m), e2.at(m), e3.at(m));
    // exactly one pair diverges deeper; the third end left at the tripod toward the root
    if (*d12 > m)
      return or3_letters(e1.at(*d12), e2.at(*d12), inverse_letter(e1.at(*d12 - 1)));
    if (*d23 > m)  // orient(e2,e3,e1) equals orient(e1,e2,e3) by cyclicity
      return or3_letters(e2.at(*d23), e3.at(*d23), inverse_letter(e2.at(*d23 - 1)));
    return or3_letters(e3.at(*d13), e1.at(*d13), inverse_letter(e3.at(*d13 - 1)));
  }

  // do the geodesics with endpoint pairs {a+,a-}, {b+,b-} cross?
  bool axes_cross(const Ray& ap, const Ray& am, const Ray& bp, const Ray& bm) const {
    if (ray_same(ap, bp) || ray_same(ap, bm) || ray_same(am, bp) || ray_same(am, bm)) return false;
    return orient(ap, bp, am) != orient(ap, bm, am);
  }

  static bool ray_same(const Ray& x, const Ray& y) { return !ray_divergence(x, y).has_value(); }

 private:
  std::vector<int> rank_;
};

// One mapping-class-normalized lift of the v-geodesic crossing the axis of u.
struct CrossingLift {
  Word element;   // conjugate of a rotation of v whose axis is this lift
  Word junction;  // conjugating prefix: element = junction rot(v) junction^-1
  int rotation = 0;
  Ray plus;   // forward end
  Ray minus;  // backward end
};

// All crossing lifts of v against axis(u), one representative per <u>-orbit.
// u and v must be cyclically reduced and primitive.  The enumeration is
// complete: a normalized crossing lift's two ends straddle the u-axis, which
// pins its junction prefix to the finite chains computed below.
inline std::vector<CrossingLift> enumerate_crossing_lifts(const BoundaryOrder& order,
                                                          const GroupPresentation& pres, const Word& u,
                                                          const Word& v) {
  pres.check_alphabet(u);
  pres.check_alphabet(v);
  std::vector<CrossingLift> out;
  const Ray uP = Ray::make({}, u);
  const Ray uM = Ray::make({}, inverse_word(u));

  auto in_right_side = [&](const Ray& e) { return order.orient(uM, e, uP) == 1; };

  // pick a reference end theta strictly inside the right side of the u-axis
  std::vector<Ray> candidates;
  for (std::size_t x = 0; x < pres.alphabet_size(); ++x)
    candidates.push_back(Ray::make({}, {static_cast<Letter>(x)}));
  for (std::size_t x = 0; x < pres.alphabet_size(); ++x)
    for (std::size_t y = 0; y < pres.alphabet_size(); ++y) {
      if (y == (x ^ 1u)) continue;
      candidates.push_back(Ray::make({static_cast<Letter>(x)}, {static_cast<Letter>(y)}));
    }
  std::optional<Ray> theta;
  for (const Ray& c : candidates) {
    if (BoundaryOrder::ray_same(c, uP) || BoundaryOrder::ray_same(c, uM)) continue;
    if (in_right_side(c)) {
      theta = c;
      break;
    }
  }
  if (!theta) throw needs_exact_error("no reference end found on the right side of the axis");
  const Ray th = *theta;
  const Ray uth = ray_apply(u, th);
  // both u-ends lie on the arc between theta and u theta that is NOT the window
  const int outside_sign = order.orient(th, uP, uth);
  if (order.orient(th, uM, uth) != outside_sign)
    throw needs_exact_error("window orientation is inconsistent");

  // junction candidates: prefixes of the common prefixes at the two window gaps
  auto prefix_chain = [&](const Ray& a, const Ray& b) {
    std::vector<Word> chain{Word{}};
    auto d = ray_divergence(a, b);
    std::size_t len = d ? *d : 0;
    Word w;
    for (std::size_t i = 0; i < len; ++i) {
      w.push_back(a.at(i));
      chain.push_back(w);
    }
    return chain;
  };
  std::vector<Word> junctions = prefix_chain(uth, uP);
  for (Word& w : prefix_chain(th, uM))
    if (std::find(junctions.begin(), junctions.end(), w) == junctions.end()) junctions.push_back(w);

  std::set<std::pair<Ray, Ray>> seen;
  auto pair_key = [](const Ray& a, const Ray& b) {
    std::pair<Ray, Ray> k{a, b};
    if (b < a) std::swap(k.first, k.second);
    return k;
  };

  std::vector<std::pair<Word, Word>> rotations;
  for (std::size_t k = 0; k < v.size(); ++k) {
    Word t = rotate_word(v, k);
    Word ti = inverse_word(t);
    rotations.emplace_back(std::move(t), std::move(ti));
  }

  for (const Word& w : junctions) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      const Word& t = rotations[k].first;
      const Word& ti = rotations[k].second;
      if (!w.empty() && (w.back() == inverse_letter(t.front()) || w.back() == inverse_letter(ti.front())))
        continue;  // cancelling junction: this lift appears at its true junction
      Ray ep = Ray::raw_periodic(w, t);
      Ray em = Ray::raw_periodic(w, ti);
      if (BoundaryOrder::ray_same(ep, uP) || BoundaryOrder::ray_same(ep, uM) ||
          BoundaryOrder::ray_same(em, uP) || BoundaryOrder::ray_same(em, uM))
        continue;  // shared endpoint: same primitive root, not a transversal crossing
      bool pin = in_right_side(ep);
      bool min = in_right_side(em);
      if (pin == min) continue;  // both ends on one side: no crossing
      const Ray& window_end = pin ? ep : em;
      bool at_theta = BoundaryOrder::ray_same(window_end, th);
      bool at_utheta = BoundaryOrder::ray_same(window_end, uth);
      bool inside = !at_utheta && (at_theta || order.orient(th, window_end, uth) == -outside_sign);
      if (!inside) continue;
      if (!seen.insert(pair_key(ep, em)).second) continue;
      CrossingLift lift;
      lift.element = free_reduce(concat(concat(w, t), inverse_word(w)));
      lift.junction = w;
      lift.rotation = static_cast<int>(k);
      lift.plus = std::move(ep);
      lift.minus = std::move(em);
      out.push_back(std::move(lift));
    }
  }
  return out;
}

}  // namespace orbitcount
