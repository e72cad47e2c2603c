#pragma once

// Genus-2 multicurves that cross the separating pants curve.  The twist
// coordinates are first normalized into their fundamental residues by the
// pants twists Ta1, Ta2, Ts; the residual configuration is traced through
// the two handles and the separating annulus.

#include "orbitcount/dehn_thurston.hpp"

namespace orbitcount {

namespace detail {

// Twist mapping class about the separating curve [a1,b1]; conjugates the
// second handle by the separating class.
inline MappingClass separating_twist(const GroupPresentation& pres, int dir) {
  Word s = pres.parse_word("a1 b1 A1 B1");
  if (dir < 0) s = inverse_word(s);
  std::vector<Word> im = identity_images(4);
  im[2] = free_reduce(concat(concat(s, Word{positive_letter(2)}), inverse_word(s)));
  im[3] = free_reduce(concat(concat(s, Word{positive_letter(3)}), inverse_word(s)));
  return MappingClass::from_images(pres, im);
}

// Base configurations with twist residues; the caller has already peeled
// whole twists off.  m1, m2 are the crossings with the handle curves, ms > 0
// the crossings with the separating curve.
WeightedCurveSystem genus2_base_tracer(const GroupPresentation& pres, long long m1, long long r1,
                                       long long m2, long long r2, long long ms, long long rs);

}  // namespace detail

inline WeightedCurveSystem detail_genus2_cross_system(const GroupPresentation& pres, const DTCoordinates& c,
                                                      WeightedCurveSystem sys) {
  const auto [m1, t1] = c.mt[0];
  const auto [m2, t2] = c.mt[1];
  const auto [ms, ts] = c.mt[2];

  // normalize the twists into their fundamental residues; the residual
  // configuration is handled by the base tracer below
  auto residue = [](long long t, long long m, long long& turns) {
    if (m == 0) {
      turns = 0;
      return t;
    }
    long long r = ((t % m) + m) % m;
    turns = (t - r) / m;
    return r;
  };
  long long k1 = 0, k2 = 0, kS = 0;
  long long r1 = residue(t1, m1, k1);
  long long r2 = residue(t2, m2, k2);
  long long rs = residue(ts, ms, kS);

  WeightedCurveSystem base = detail::genus2_base_tracer(pres, m1, r1, m2, r2, ms, rs);

  auto gens = twist_generators(pres);  // Ta1 at 0/1, Ta2 at 8/9
  auto twist_power = [&](const MappingClass& fwd, const MappingClass& bwd, long long k,
                         WeightedCurveSystem x) {
    for (long long i = 0; i < std::llabs(k); ++i) x = (k > 0 ? fwd : bwd).apply(x);
    return x;
  };
  WeightedCurveSystem out = base;
  out = twist_power(gens[0], gens[1], k1, out);
  out = twist_power(gens[8], gens[9], k2, out);
  out = twist_power(detail::separating_twist(pres, 1), detail::separating_twist(pres, -1), kS, out);
  for (const auto& [comp, w] : out.components()) sys.add_canonical(comp, w);
  return sys;
}

inline WeightedCurveSystem detail::genus2_base_tracer(const GroupPresentation& pres, long long m1,
                                                      long long r1, long long m2, long long r2,
                                                      long long ms, long long rs) {
  WeightedCurveSystem out(pres);
  const long long h = ms / 2;
  if (m1 == 0 && m2 == 0) {
    // r1, r2 copies of the handle curves plus a stack of connectors
    if (r1 > 0) out.add(pres.parse_word("a1"), static_cast<double>(r1));
    if (r2 > 0) out.add(pres.parse_word("a2"), static_cast<double>(r2));
    if (rs == 0) {
      out.add(pres.parse_word("a1 a2"), static_cast<double>(h));
      return out;
    }
  }
  throw unsupported_signature_error(
      "genus-2 tracer: configuration (" + std::to_string(m1) + "," + std::to_string(r1) + ")(" +
      std::to_string(m2) + "," + std::to_string(r2) + ")(" + std::to_string(ms) + "," +
      std::to_string(rs) + ") crossing the separating curve is not yet tabled");
}

}  // namespace orbitcount
