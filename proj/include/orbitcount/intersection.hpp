#pragma once

// Geometric intersection numbers, self-intersection numbers and the filling
// certificate.  Punctured surfaces use the exact boundary circular order; the
// closed genus-2 surface uses a metric double-coset sweep with quantized
// endpoint deduplication and radius-doubling certification.
//
// Conventions: geometric_intersection(u, v) for distinct primitive classes is
// the minimal transversal crossing number; for equal primitive classes it is
// the current pairing I(u,u) = 2 * self_intersection(u).  Powers factor out:
// i(u^k, v^m) = k m i(u,v), si(u^k) = k^2 si(u) + (k-1).

#include <map>
#include <mutex>
#include <optional>
#include <set>

#include "orbitcount/boundary_order.hpp"
#include "orbitcount/curve_system.hpp"
#include "orbitcount/dehn_thurston.hpp"
#include "orbitcount/holonomy.hpp"

namespace orbitcount {

namespace detail {

// ---- numeric path (closed surfaces) ---------------------------------------

// conjugator sending axis(W) to the imaginary axis, attracting end at infinity
inline Mat2 axis_frame(const Mat2& W) {
  AxisEndpoints ax = Holonomy::fixed_points(W);
  double att = ax.attracting, rep = ax.repelling;
  Mat2 C;
  if (std::isinf(att))
    C = Mat2{1, -rep, 0, 1};
  else if (std::isinf(rep))
    C = Mat2{0, -1, 1, -att};
  else
    C = Mat2{1, -rep, 1, -att};
  if (C.det() < 0) C = Mat2{-C.a, -C.b, C.c, C.d};
  double dt = C.det();
  if (!(dt > 0)) throw structure_error("degenerate axis frame");
  return C.scaled(1.0 / std::sqrt(dt));
}

inline double hyperbolic_distance(double x1, double y1, double x2, double y2) {
  double dx = x1 - x2, dy = y1 - y2;
  return std::acosh(1.0 + (dx * dx + dy * dy) / (2.0 * y1 * y2));
}

// distance from z to the geodesic with real endpoints p != q (or a vertical)
inline double distance_to_geodesic(double x, double y, double p, double q) {
  if (std::isinf(p) || std::isinf(q)) {
    double v = std::isinf(p) ? q : p;
    return std::asinh(std::fabs(x - v) / y);
  }
  double c = (p + q) / 2, r = std::fabs(p - q) / 2;
  double zx = x - c;
  double num = std::fabs(zx * zx + y * y - r * r);
  return std::asinh(num / (2 * r * y));
}

struct NumericLift {
  Word element;     // conjugate of v whose axis is this lift
  Word conjugator;  // element = conjugator v conjugator^-1
  double end_low = 0;  // negative endpoint in the u-axis frame, folded
  double end_high = 0;
};

// All <u>-orbit representatives of lifts of the v-geodesic crossing axis(u).
// Sweeps the coset space <u>\Group by expanding one generator at a time and
// folding every node back into the fundamental annulus of the deck action of
// u, which keeps all matrices bounded.
inline std::vector<NumericLift> crossing_lifts_numeric(const Holonomy& X, const Word& u, const Word& v,
                                                       double slack) {
  const GroupPresentation& pres = X.presentation();
  const double lu = X.geodesic_length(u);
  const double lv = X.geodesic_length(v);

  Mat2 F = axis_frame(X.evaluate(u).m);
  Mat2 Fi = F.inverse();
  auto to_frame = [&](const Mat2& m) { return F * m * Fi; };
  std::vector<Mat2> letter_mats;
  for (std::size_t letter = 0; letter < pres.alphabet_size(); ++letter) {
    Mat2 m = X.generator_matrix(static_cast<unsigned>(letter >> 1));
    if (is_inverse(static_cast<Letter>(letter))) m = m.inverse();
    letter_mats.push_back(to_frame(m));
  }
  Mat2 Uf = to_frame(X.evaluate(u).m);            // diagonal up to round-off
  Mat2 Ufi = Uf.inverse();
  const bool self_pair = (u == v);
  AxisEndpoints vax;
  if (self_pair) {
    vax.attracting = std::numeric_limits<double>::infinity();
    vax.repelling = 0.0;
  } else {
    vax = Holonomy::fixed_points(to_frame(X.evaluate(v).m));
  }
  double base_gap = distance_to_geodesic(0.0, 1.0, vax.attracting, vax.repelling);

  const double R = (lu + lv) / 2.0 + base_gap + slack;
  const double mid_height = std::exp(lu / 2.0);

  struct Node {
    Mat2 g;
    Word w;  // word with the fold absorbed: rho(w) = (deck power) * g
  };
  auto orbit_point = [](const Mat2& g, double& x, double& y) {
    double den = g.c * g.c + g.d * g.d;
    x = (g.a * g.c + g.b * g.d) / den;
    y = g.det() / den;
  };
  // fold g by left powers of u so the orbit point has |z| in [1, e^lu)
  auto fold_node = [&](Mat2 g, Word w) {
    double x, y;
    orbit_point(g, x, y);
    if (y > 0) {
      double r = std::hypot(x, y);
      long long k = static_cast<long long>(std::floor(std::log(r) / lu));
      for (long long i = 0; i < std::llabs(k); ++i) {
        g = (k > 0 ? Ufi : Uf) * g;
        const Word& step = (k > 0) ? inverse_word(u) : u;
        Word nw = step;
        nw.insert(nw.end(), w.begin(), w.end());
        w = free_reduce(nw);
      }
    }
    return Node{g, std::move(w)};
  };

  std::vector<Node> queue{fold_node(Mat2::identity(), {})};
  std::set<std::array<long long, 4>> seen;
  auto elem_key = [](const Mat2& m) {
    double lead = 0;
    for (double e : {m.a, m.b, m.c, m.d})
      if (std::fabs(e) > std::fabs(lead)) lead = e;
    double s = lead < 0 ? -1.0 : 1.0;
    auto quant = [&](double x) { return static_cast<long long>(std::llround(s * x * 1e6)); };
    return std::array<long long, 4>{quant(m.a), quant(m.b), quant(m.c), quant(m.d)};
  };
  auto coset_seen = [&](const Mat2& g) {
    // check the fold and its deck neighbours so quantization jitter at the
    // annulus boundary cannot duplicate a coset
    for (const Mat2& m : {g, Uf * g, Ufi * g})
      if (seen.count(elem_key(m))) return true;
    seen.insert(elem_key(g));
    return false;
  };
  coset_seen(queue[0].g);

  std::vector<NumericLift> lifts;
  std::vector<std::array<double, 2>> lift_logs;
  // the fold can land on either side of the annulus seam, so compare the
  // log-endpoint pair up to a joint shift by one period
  auto lift_seen = [&](double llo, double lhi) {
    for (const auto& e : lift_logs)
      for (double s : {-lu, 0.0, lu})
        if (std::fabs(e[0] - (llo + s)) < 1e-6 && std::fabs(e[1] - (lhi + s)) < 1e-6) return true;
    lift_logs.push_back({llo, lhi});
    return false;
  };

  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    Node node = queue[qi];
    double e1 = node.g.apply_boundary(vax.attracting);
    double e2 = node.g.apply_boundary(vax.repelling);
    if (std::isfinite(e1) && std::isfinite(e2) && e1 * e2 < 0) {
      Word element = free_reduce(concat(concat(node.w, v), inverse_word(node.w)));
      bool trivial = (element == u) || (element == inverse_word(u));
      if (!trivial) {
        if (std::max(std::fabs(e1), std::fabs(e2)) > 1e8 || std::min(std::fabs(e1), std::fabs(e2)) < 1e-8)
          throw needs_exact_error("crossing decision too close to tangency");
        double h = std::sqrt(-e1 * e2);
        long long k = static_cast<long long>(std::floor(std::log(h) / lu));
        double scale = std::exp(-static_cast<double>(k) * lu);
        double lo = std::min(e1, e2) * scale, hi = std::max(e1, e2) * scale;
        if (!lift_seen(std::log(-lo), std::log(hi))) {
          Word upow;
          for (long long i = 0; i < std::llabs(k); ++i) {
            const Word& step = (k > 0) ? inverse_word(u) : u;
            upow.insert(upow.end(), step.begin(), step.end());
          }
          Word g = free_reduce(concat(upow, node.w));
          NumericLift lift;
          lift.element = free_reduce(concat(concat(g, v), inverse_word(g)));
          lift.conjugator = std::move(g);
          lift.end_low = lo;
          lift.end_high = hi;
          lifts.push_back(std::move(lift));
        }
      }
    }
    double x, y;
    orbit_point(node.g, x, y);
    if (!(y > 0)) continue;
    double dmin = std::numeric_limits<double>::infinity();
    for (double kk : {-1.0, 0.0, 1.0}) {
      double s = std::exp(-kk * lu);
      dmin = std::min(dmin, hyperbolic_distance(x * s, y * s, 0.0, mid_height));
    }
    if (dmin > R) continue;
    for (std::size_t letter = 0; letter < pres.alphabet_size(); ++letter) {
      Letter L = static_cast<Letter>(letter);
      if (!node.w.empty() && node.w.back() == inverse_letter(L)) continue;
      Word w2 = node.w;
      w2.push_back(L);
      Node next = fold_node(node.g * letter_mats[letter], std::move(w2));
      if (coset_seen(next.g)) continue;
      queue.push_back(std::move(next));
    }
  }
  return lifts;
}

inline long long crossing_count_numeric(const Holonomy& X, const Word& u, const Word& v) {
  long long n1 = static_cast<long long>(crossing_lifts_numeric(X, u, v, 2.5).size());
  long long n2 = static_cast<long long>(crossing_lifts_numeric(X, u, v, 4.0).size());
  if (n1 != n2)
    throw needs_exact_error("metric crossing sweep did not stabilize under radius growth");
  return n1;
}

}  // namespace detail

// ---- public intersection API ----------------------------------------------

class Intersector {
 public:
  explicit Intersector(const Holonomy& X) : X_(&X) {
    if (!X.presentation().closed()) order_.emplace(X);
  }

  const Holonomy& holonomy() const { return *X_; }
  const GroupPresentation& presentation() const { return X_->presentation(); }
  const BoundaryOrder* order() const { return order_ ? &*order_ : nullptr; }

  // crossing lifts of the primitive class v against the axis of the
  // primitive class u, one per <u>-orbit; exact on punctured surfaces
  std::vector<Word> crossing_lift_elements(const Word& u, const Word& v) const {
    std::vector<Word> out;
    if (order_) {
      for (auto& l : enumerate_crossing_lifts(*order_, presentation(), u, v)) out.push_back(l.element);
    } else {
      for (auto& l : detail::crossing_lifts_numeric(*X_, u, v, 2.5)) out.push_back(l.element);
    }
    return out;
  }

  long long geometric(const CyclicWord& cu, const CyclicWord& cv) const {
    auto [ru, ku] = cu.primitive_root();
    auto [rv, kv] = cv.primitive_root();
    CyclicWord cru = CyclicWord::canonical(presentation(), ru);
    CyclicWord crv = CyclicWord::canonical(presentation(), rv);
    if (cru == crv) return 2LL * ku * kv * self_primitive(cru.letters());
    return static_cast<long long>(ku) * kv * crossing_count(cru.letters(), crv.letters());
  }

  long long self(const CyclicWord& c) const {
    auto [r, k] = c.primitive_root();
    CyclicWord cr = CyclicWord::canonical(presentation(), r);
    long long base = self_primitive(cr.letters());
    return static_cast<long long>(k) * k * base + (k - 1);
  }

  double pairing(const WeightedCurveSystem& s, const WeightedCurveSystem& t) const {
    double total = 0;
    for (const auto& [cs, ws] : s.components())
      for (const auto& [ct, wt] : t.components()) total += ws * wt * static_cast<double>(geometric(cs, ct));
    return total;
  }

 private:
  long long crossing_count(const Word& u, const Word& v) const {
    auto key = std::make_pair(u, v);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    long long n;
    if (order_)
      n = static_cast<long long>(enumerate_crossing_lifts(*order_, presentation(), u, v).size());
    else
      n = detail::crossing_count_numeric(*X_, u, v);
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(std::move(key), n);
    return n;
  }

  long long self_primitive(const Word& u) const {
    long long n = crossing_count(u, u);
    if (n % 2 != 0) throw needs_exact_error("self-crossing sweep produced an odd lift count");
    return n / 2;
  }

  const Holonomy* X_;
  std::optional<BoundaryOrder> order_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<Word, Word>, long long> cache_;
};

inline long long geometric_intersection(const Holonomy& X, const CyclicWord& u, const CyclicWord& v) {
  return Intersector(X).geometric(u, v);
}

inline long long self_intersection(const Holonomy& X, const CyclicWord& c) { return Intersector(X).self(c); }

inline double pairing(const Holonomy& X, const WeightedCurveSystem& s, const WeightedCurveSystem& t) {
  return Intersector(X).pairing(s, t);
}

}  // namespace orbitcount

#include "orbitcount/filling.hpp"
