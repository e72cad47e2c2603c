#pragma once

// Integer Dehn-Thurston coordinates of multicurves relative to the standard
// pants decomposition, their enumeration, and conversion to curve systems.
//
// Marking conventions (fixed; the round-trip tests pin them):
//   (1,1): one coordinate pair (m, t) relative to the pants curve a1.
//          m = i(mu, a1); the multicurve with coordinates (m, t) is
//          k * slope(p, q) with m = k q, t = k p, and slope(0,1) = b1,
//          slope(1,0) = a1.  When m = 0 the twist counts parallel copies
//          of a1, so t >= 0 there.
//   (2,0): coordinate pairs for (a1, a2, s), s the separating class
//          [a1,b1].  The m-coordinate on s is even (pants parity).

#include <functional>
#include <numeric>
#include <vector>

#include "orbitcount/curve_system.hpp"
#include "orbitcount/mapping_class.hpp"
#include "orbitcount/words.hpp"

namespace orbitcount {

struct DTCoordinates {
  SurfaceSignature signature;
  std::vector<std::pair<long long, long long>> mt;  // (m_i, t_i) per interior curve

  static int curve_count(SurfaceSignature sig) { return 3 * sig.genus - 3 + sig.punctures; }

  void validate() const {
    signature.validate();
    if (mt.size() != static_cast<std::size_t>(curve_count(signature)))
      throw precondition_error("wrong number of Dehn-Thurston coordinate pairs");
    bool all_zero = true;
    for (const auto& [m, t] : mt) {
      if (m < 0) throw precondition_error("intersection coordinates must be nonnegative");
      if (m == 0 && t < 0) throw precondition_error("twist must be nonnegative where m = 0");
      if (m != 0 || t != 0) all_zero = false;
    }
    if (all_zero) throw precondition_error("coordinates must not all vanish");
    if (signature == SurfaceSignature{2, 0} && mt[2].first % 2 != 0)
      throw precondition_error("separating-curve intersection coordinate must be even");
  }

  bool operator==(const DTCoordinates&) const = default;

  std::string format() const {
    std::string s = "[";
    for (std::size_t i = 0; i < mt.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(mt[i].first) + " " + std::to_string(mt[i].second);
    }
    return s + "]";
  }
};

// Stream all coordinates with max(|m|,|t|) <= N, each exactly once, in
// lexicographic order over (m1, t1, m2, t2, ...).
inline void enumerate_multicurves(SurfaceSignature sig, long long N,
                                  const std::function<void(const DTCoordinates&)>& visit) {
  sig.validate();
  if (N < 1) throw precondition_error("enumeration bound must be at least 1");
  const int k = DTCoordinates::curve_count(sig);
  std::vector<std::pair<long long, long long>> mt(static_cast<std::size_t>(k), {0, 0});
  // recursive odometer honouring the half-plane and parity constraints
  std::function<void(int, bool)> rec = [&](int i, bool any) {
    if (i == k) {
      if (!any) return;
      DTCoordinates c{sig, mt};
      visit(c);
      return;
    }
    const bool separating = (sig == SurfaceSignature{2, 0} && i == 2);
    for (long long m = 0; m <= N; m += (separating ? 2 : 1)) {
      long long t0 = (m == 0) ? 0 : -N;
      for (long long t = t0; t <= N; ++t) {
        mt[static_cast<std::size_t>(i)] = {m, t};
        rec(i + 1, any || m != 0 || t != 0);
      }
    }
  };
  rec(0, false);
}

inline std::vector<DTCoordinates> enumerate_multicurves(SurfaceSignature sig, long long N) {
  std::vector<DTCoordinates> out;
  enumerate_multicurves(sig, N, [&](const DTCoordinates& c) { out.push_back(c); });
  return out;
}

namespace detail {

// Word of the primitive slope (p, q) on a one-holed torus with generators
// (a_idx, b_idx): the class of p[a] + q[b], built by replaying the Euclidean
// algorithm through the twist action.  slope(1,0) = a, slope(0,1) = b.
inline Word slope_word(const GroupPresentation& pres, long long p, long long q, unsigned a_gen,
                       unsigned b_gen) {
  if (std::gcd(std::llabs(p), std::llabs(q)) != 1) throw precondition_error("slope must be primitive");
  const Letter a = positive_letter(a_gen), A = inverse_letter(a);
  const Letter b = positive_letter(b_gen), B = inverse_letter(b);
  // Ta: a -> a, b -> b a   (homology [[1,1],[0,1]]), Tb: a -> a b^-1 ([[1,0],[-1,1]])
  struct Step {
    bool ta;
    int dir;
  };
  std::vector<Step> steps;
  long long pp = p, qq = q;
  while (qq != 0 && pp != 0) {
    if (std::llabs(pp) >= std::llabs(qq)) {
      // undo Ta^dir: (p,q) -> (p - dir q, q); choose dir to shrink |p|
      int dir = ((pp > 0) == (qq > 0)) ? 1 : -1;
      pp -= dir * qq;
      steps.push_back({true, dir});
    } else {
      // undo Tb^dir: (p,q) -> (p, q + dir p)
      int dir = ((pp > 0) == (qq > 0)) ? -1 : 1;
      qq += dir * pp;
      steps.push_back({false, dir});
    }
  }
  Word w = (qq == 0) ? Word{a} : Word{b};
  auto apply_ta = [&](const Word& x, int dir) {
    Word out;
    for (Letter l : x) {
      if (l == b) {
        out.push_back(b);
        out.push_back(dir > 0 ? a : A);
      } else if (l == B) {
        out.push_back(dir > 0 ? A : a);
        out.push_back(B);
      } else {
        out.push_back(l);
      }
    }
    return free_reduce(out);
  };
  auto apply_tb = [&](const Word& x, int dir) {
    Word out;
    for (Letter l : x) {
      if (l == a) {
        out.push_back(a);
        out.push_back(dir > 0 ? B : b);
      } else if (l == A) {
        out.push_back(dir > 0 ? b : B);
        out.push_back(A);
      } else {
        out.push_back(l);
      }
    }
    return free_reduce(out);
  };
  for (auto it = steps.rbegin(); it != steps.rend(); ++it)
    w = it->ta ? apply_ta(w, it->dir) : apply_tb(w, it->dir);
  return w;
}

}  // namespace detail

// defined in dehn_thurston_genus2.hpp: pieces crossing the separating curve
WeightedCurveSystem detail_genus2_cross_system(const GroupPresentation& pres, const DTCoordinates& c,
                                               WeightedCurveSystem sys);

// The unit-weight disjoint simple multicurve realizing the coordinates, with
// integer multiplicities as weights.
inline WeightedCurveSystem dt_to_system(const GroupPresentation& pres, const DTCoordinates& c) {
  c.validate();
  if (!(pres.signature() == c.signature)) throw precondition_error("coordinates belong to another surface");
  WeightedCurveSystem sys(pres);
  auto add_slope_piece = [&](long long m, long long t, unsigned a_gen, unsigned b_gen) {
    if (m == 0 && t == 0) return;
    long long k = std::gcd(std::llabs(m), std::llabs(t));
    long long q = m / k, p = t / k;
    sys.add(detail::slope_word(pres, p, q, a_gen, b_gen), static_cast<double>(k));
  };
  if (c.signature == SurfaceSignature{1, 1}) {
    add_slope_piece(c.mt[0].first, c.mt[0].second, 0, 1);
    return sys;
  }
  if (c.signature == SurfaceSignature{2, 0}) {
    const auto [m1, t1] = c.mt[0];
    const auto [m2, t2] = c.mt[1];
    const auto [ms, ts] = c.mt[2];
    if (ms == 0) {
      // the multicurve splits along s into per-handle slope pieces plus
      // parallel copies of s itself
      add_slope_piece(m1, t1, 0, 1);
      add_slope_piece(m2, t2, 2, 3);
      if (ts > 0) sys.add(pres.parse_word("a1 b1 A1 B1"), static_cast<double>(ts));
      return sys;
    }
    return detail_genus2_cross_system(pres, c, sys);
  }
  throw unsupported_signature_error("Dehn-Thurston marking tables ship for (1,1) and (2,0)");
}

}  // namespace orbitcount

#include "orbitcount/dehn_thurston_genus2.hpp"
