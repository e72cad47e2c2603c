#pragma once

// Discrete faithful SL(2,R) representations from Fenchel-Nielsen data, with
// translation lengths, Liouville intersections and axis endpoints.
//
// Supported decompositions (documented marking conventions):
//   (g,n) = (1,1): one interior curve, the generator a1.  The puncture is a
//     cusp.  Twisting is length-normalized along a1; tau -> tau + length
//     realizes the Dehn twist about a1.
//   (g,n) = (2,0): interior curves (a1, a2, s) with s the separating class
//     [a1,b1].  Each handle is a one-holed torus glued along s.
//
// The construction per pair of pants uses the trace normal form with all
// three boundary traces negative; pants are glued by conjugators that
// diagonalize the shared boundary word, with the twist inserted as a
// translation along the common axis.

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "orbitcount/curve_system.hpp"
#include "orbitcount/linalg.hpp"
#include "orbitcount/words.hpp"

namespace orbitcount {

struct FenchelNielsen {
  SurfaceSignature signature;
  std::vector<double> lengths;  // one per interior pants curve, > 0
  std::vector<double> twists;   // length-normalized twisting

  static int interior_curve_count(SurfaceSignature sig) { return 3 * sig.genus - 3 + sig.punctures; }

  void validate() const {
    signature.validate();
    const std::size_t k = static_cast<std::size_t>(interior_curve_count(signature));
    if (lengths.size() != k || twists.size() != k)
      throw structure_error("Fenchel-Nielsen data needs " + std::to_string(k) + " lengths and twists");
    for (double l : lengths)
      if (!(l > 0) || !std::isfinite(l)) throw structure_error("interior pants curve lengths must be positive");
    for (double t : twists)
      if (!std::isfinite(t)) throw structure_error("twists must be finite");
  }

  static FenchelNielsen modular_torus() { return {{1, 1}, {2.0 * std::acosh(1.5)}, {0.0}}; }
  static FenchelNielsen genus2_regular() {
    double l = 2.0 * std::acosh(1.0 + std::numbers::sqrt2);
    return {{2, 0}, {l, l, l}, {0.0, 0.0, 0.0}};
  }
};

struct AxisEndpoints {
  double attracting = 0;
  double repelling = 0;
};

namespace detail {

inline Mat2 diag(double top, double bottom) { return {top, 0, 0, bottom}; }
inline Mat2 translation_along_imaginary_axis(double t) { return diag(std::exp(t / 2), std::exp(-t / 2)); }

// conjugator C with C^-1 W C = diag(-e^{l/2}, -e^{-l/2}); deterministic choice
inline Mat2 diagonalizer_negative(const Mat2& W, double length) {
  const double lam_att = -std::exp(length / 2);
  const double lam_rep = -std::exp(-length / 2);
  auto eigenvector = [&](double lam) -> std::array<double, 2> {
    // (W - lam) v = 0; pick the numerically larger row construction
    std::array<double, 2> v1{W.b, lam - W.a};
    std::array<double, 2> v2{lam - W.d, W.c};
    double n1 = std::fabs(v1[0]) + std::fabs(v1[1]);
    double n2 = std::fabs(v2[0]) + std::fabs(v2[1]);
    std::array<double, 2> v = (n1 >= n2) ? v1 : v2;
    double n = std::hypot(v[0], v[1]);
    if (n == 0) throw structure_error("degenerate eigenvector in pants gluing");
    v[0] /= n;
    v[1] /= n;
    double lead = (std::fabs(v[0]) > 1e-14) ? v[0] : v[1];
    if (lead < 0) {
      v[0] = -v[0];
      v[1] = -v[1];
    }
    return v;
  };
  auto va = eigenvector(lam_att);
  auto vr = eigenvector(lam_rep);
  Mat2 C{va[0], vr[0], va[1], vr[1]};
  double dt = C.det();
  if (std::fabs(dt) < 1e-13) throw structure_error("pants gluing conjugator is singular");
  if (dt < 0) {
    C.b = -C.b;
    C.d = -C.d;
    dt = -dt;
  }
  double s = std::sqrt(dt);
  return C.scaled(1.0 / s);
}

// generators of a pants group with boundary traces -2cosh(Li/2);
// boundary words are x1, x2 and (x1 x2)^-1
struct PantsRep {
  Mat2 x1, x2, x3;
};

inline PantsRep pants_rep(double l1, double l2, double l3) {
  const double lam1 = -std::exp(l1 / 2);
  const double lam2 = -std::exp(l2 / 2);
  const double z = -2.0 * std::cosh(l3 / 2);
  const double c = z - lam1 * lam2 - 1.0 / (lam1 * lam2);
  PantsRep p;
  p.x1 = {lam1, 1.0, 0.0, 1.0 / lam1};
  p.x2 = {lam2, 0.0, c, 1.0 / lam2};
  p.x3 = (p.x1 * p.x2).inverse();
  return p;
}

inline const Mat2 kFlip{0, -1, 1, 0};  // z -> -1/z; inverts the axis direction and swaps sides

}  // namespace detail

class Holonomy {
 public:
  // exact matrices of the modular torus (commutator subgroup of PSL(2,Z))
  static Holonomy modular_torus(double tolerance = 1e-9) {
    Holonomy h(GroupPresentation::standard({1, 1}), tolerance);
    h.mats_ = {Mat2{1, 1, 1, 2}, Mat2{1, -1, -1, 2}};
    h.fn_ = FenchelNielsen::modular_torus();
    h.validate();
    return h;
  }

  static Holonomy build(const FenchelNielsen& fn, double tolerance = 1e-9) {
    fn.validate();
    const SurfaceSignature sig = fn.signature;
    Holonomy h(GroupPresentation::standard(sig), tolerance);
    h.fn_ = fn;
    if (sig == SurfaceSignature{1, 1}) {
      h.mats_ = build_punctured_torus(fn.lengths[0], fn.twists[0]);
    } else if (sig == SurfaceSignature{2, 0}) {
      h.mats_ = build_genus2(fn.lengths, fn.twists);
    } else {
      throw unsupported_signature_error("holonomy construction shipped for (1,1) and (2,0) only");
    }
    h.validate();
    return h;
  }

  const GroupPresentation& presentation() const { return pres_; }
  const FenchelNielsen& fenchel_nielsen() const { return fn_; }
  double tolerance() const { return tol_; }
  const Mat2& generator_matrix(unsigned g) const { return mats_.at(g); }

  ScaledMat2 evaluate(const Word& w) const {
    pres_.check_alphabet(w);
    ScaledMat2 acc{Mat2::identity(), 0};
    for (Letter x : w) {
      const Mat2& m = mats_[generator_of(x)];
      acc = acc * ScaledMat2{is_inverse(x) ? m.inverse() : m, 0};
    }
    return acc;
  }

  // translation length 2*acosh(|tr|/2); throws for parabolic/elliptic input
  double geodesic_length(const Word& w) const {
    ScaledMat2 m = evaluate(w);
    double lt = m.log_abs_trace();
    if (lt < std::log(2.0 + tol_))
      throw not_hyperbolic_error("word is not hyperbolic (peripheral or trivial): |trace| <= 2 + tol");
    return length_from_log_trace(lt);
  }
  double geodesic_length(const CyclicWord& c) const { return geodesic_length(c.letters()); }

  // I(X, s) = sum of weighted lengths: the Liouville pairing on systems
  double liouville_intersection(const WeightedCurveSystem& s) const {
    double total = 0;
    for (const auto& [c, w] : s.components()) total += w * geodesic_length(c.letters());
    return total;
  }

  AxisEndpoints axis(const Word& w) const {
    ScaledMat2 sm = evaluate(w);
    if (sm.log_abs_trace() < std::log(2.0 + tol_))
      throw not_hyperbolic_error("axis of a non-hyperbolic element");
    return fixed_points(sm.m);
  }

  static AxisEndpoints fixed_points(const Mat2& m) {
    if (m.c == 0) {
      double other = (m.b == 0 && m.a == m.d) ? std::numeric_limits<double>::quiet_NaN() : m.b / (m.d - m.a);
      bool inf_attracting = std::fabs(m.a) > std::fabs(m.d);
      AxisEndpoints ax;
      ax.attracting = inf_attracting ? std::numeric_limits<double>::infinity() : other;
      ax.repelling = inf_attracting ? other : std::numeric_limits<double>::infinity();
      return ax;
    }
    // roots of c z^2 + (d-a) z - b, computed cancellation-free
    double tr = m.a + m.d;
    double disc = tr * tr - 4.0 * m.det();
    if (disc <= 0) throw not_hyperbolic_error("no real axis");
    double sq = std::sqrt(disc);
    double diff = m.a - m.d;
    double big = (diff >= 0 ? diff + sq : diff - sq) / (2 * m.c);
    double small = (m.b == 0) ? 0.0 : (-m.b / m.c) / big;  // product of roots is -b/c
    double z1 = big, z2 = small;
    double scale = std::sqrt(std::fabs(m.det()));
    AxisEndpoints ax;
    if (std::fabs(m.c * z1 + m.d) > scale) {
      ax.attracting = z1;
      ax.repelling = z2;
    } else {
      ax.attracting = z2;
      ax.repelling = z1;
    }
    return ax;
  }

  // residual of the construction invariants, used by tests and validate()
  double relator_residual() const {
    if (!pres_.closed()) return 0;
    ScaledMat2 r = evaluate(pres_.relator());
    Mat2 m = r.m.scaled(std::exp(r.log_scale));
    double plus = std::max(std::max(std::fabs(m.a - 1), std::fabs(m.d - 1)), std::max(std::fabs(m.b), std::fabs(m.c)));
    double minus = std::max(std::max(std::fabs(m.a + 1), std::fabs(m.d + 1)), std::max(std::fabs(m.b), std::fabs(m.c)));
    return std::min(plus, minus);
  }

  double peripheral_trace_residual() const {
    double worst = 0;
    for (const Word& p : pres_.peripheral_words()) {
      ScaledMat2 m = evaluate(p);
      worst = std::max(worst, std::fabs(m.abs_trace() - 2.0));
    }
    return worst;
  }

 private:
  explicit Holonomy(GroupPresentation pres, double tol) : pres_(std::move(pres)), tol_(tol) {}

  void validate() const {
    if (pres_.closed()) {
      double r = relator_residual();
      if (r > tol_)
        throw structure_error("holonomy construction failed: relator residual " + std::to_string(r));
    } else {
      double r = peripheral_trace_residual();
      if (r > tol_)
        throw structure_error("holonomy construction failed: peripheral trace residual " + std::to_string(r));
    }
    // sampled hyperbolicity of short nonperipheral words
    std::mt19937 rng(20240915);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(pres_.alphabet_size()) - 1);
    for (int t = 0; t < 60; ++t) {
      Word w;
      for (int i = 0; i <= t % 6; ++i) w.push_back(static_cast<Letter>(pick(rng)));
      Word red = pres_.closed() ? pres_.dehn_reduce_cyclic(w) : cyclic_reduce(free_reduce(w));
      if (red.empty()) continue;
      bool peripheral = false;
      if (!pres_.closed()) {
        try {
          peripheral = is_peripheral_class(pres_, CyclicWord::canonical(pres_, red));
        } catch (const trivial_class_error&) {
          continue;
        }
      }
      if (peripheral) continue;
      if (evaluate(red).abs_trace() < 2.0 - 1e-7)
        throw structure_error("holonomy construction failed: sampled word is elliptic");
    }
  }

  static std::vector<Mat2> build_punctured_torus(double length, double twist) {
    const double mu = std::exp(length / 2);
    const double x = mu + 1.0 / mu;
    const double y = x / std::sqrt(x - 2.0);
    const double p = y / (mu + 1.0);
    const double s = y * mu / (mu + 1.0);
    const double q = 1.0 / std::sinh(length / 2);
    Mat2 A = detail::diag(mu, 1.0 / mu);
    Mat2 B0{p, q, q, s};
    Mat2 B = detail::translation_along_imaginary_axis(twist) * B0;
    return {A, B};
  }

  static std::vector<Mat2> build_genus2(const std::vector<double>& L, const std::vector<double>& T) {
    using namespace detail;
    const double l1 = L[0], l2 = L[1], ls = L[2];
    const double t1 = T[0], t2 = T[1], ts = T[2];
    PantsRep P1 = pants_rep(l1, l1, ls);
    PantsRep P2 = pants_rep(l2, l2, ls);

    // place P1 in the frame of the separating curve
    Mat2 C3 = diagonalizer_negative(P1.x3, ls);
    Mat2 C3i = C3.inverse();
    auto place1 = [&](const Mat2& m) { return C3i * m * C3; };

    // place P2 on the far side with twist ts
    Mat2 G = translation_along_imaginary_axis(ts) * kFlip * diagonalizer_negative(P2.x3, ls).inverse();
    Mat2 Gi = G.inverse();
    auto place2 = [&](const Mat2& m) { return G * m * Gi; };

    // stable letter of the self-gluing of P1 (slots 1 and 2 both carry a1)
    Mat2 U1 = C3i * diagonalizer_negative(P1.x1, l1);
    Mat2 U2 = C3i * diagonalizer_negative(P1.x2, l1);
    Mat2 B1 = U1 * translation_along_imaginary_axis(t1) * kFlip * U2.inverse();

    Mat2 V1 = G * diagonalizer_negative(P2.x1, l2);
    Mat2 V2 = G * diagonalizer_negative(P2.x2, l2);
    Mat2 B2 = V1 * translation_along_imaginary_axis(t2) * kFlip * V2.inverse();

    Mat2 a1 = place1(P1.x1);
    Mat2 b1 = B1.inverse();
    Mat2 a2 = place2(P2.x1);
    Mat2 b2 = B2.inverse();
    return {a1, b1, a2, b2};
  }

  GroupPresentation pres_;
  double tol_ = 1e-9;
  FenchelNielsen fn_;
  std::vector<Mat2> mats_;
};

inline Holonomy build_holonomy(const FenchelNielsen& fn, double tolerance = 1e-9) {
  return Holonomy::build(fn, tolerance);
}

inline Holonomy holonomy_preset(const std::string& name, double tolerance = 1e-9) {
  if (name == "modular_torus") return Holonomy::modular_torus(tolerance);
  if (name == "genus2_regular") return Holonomy::build(FenchelNielsen::genus2_regular(), tolerance);
  throw config_error("unknown surface preset '" + name + "'");
}

}  // namespace orbitcount
