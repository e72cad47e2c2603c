#pragma once

// Surface group presentations, freely/cyclically reduced words and canonical
// cyclic forms.  Letters are small integers: generator g is the letter 2*g,
// its inverse 2*g+1.  Punctured surfaces work in a free group of rank
// 2g+n-1 (one boundary generator eliminated through the relator), so free
// reduction is complete there.  Closed surfaces carry the standard relator
// and canonical forms additionally quotient by Dehn moves.

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "orbitcount/errors.hpp"

namespace orbitcount {

using Letter = std::uint8_t;
using Word = std::vector<Letter>;

constexpr Letter inverse_letter(Letter x) { return static_cast<Letter>(x ^ 1u); }
constexpr unsigned generator_of(Letter x) { return x >> 1; }
constexpr bool is_inverse(Letter x) { return (x & 1u) != 0; }
constexpr Letter positive_letter(unsigned gen) { return static_cast<Letter>(2 * gen); }

inline Word inverse_word(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(inverse_letter(*it));
  return out;
}

inline Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Free reduction: cancel adjacent x x^-1 pairs until none remain.
inline Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter x : w) {
    if (!out.empty() && out.back() == inverse_letter(x))
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

// Cyclic reduction of an already freely reduced word.
inline Word cyclic_reduce(Word w) {
  std::size_t i = 0, j = w.size();
  while (j > i + 1 && w[i] == inverse_letter(w[j - 1])) {
    ++i;
    --j;
  }
  return Word(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j));
}

inline Word rotate_word(const Word& w, std::size_t k) {
  if (w.empty()) return w;
  k %= w.size();
  Word out;
  out.reserve(w.size());
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

// Booth's least-rotation algorithm; O(n).
inline std::size_t least_rotation_index(const Word& w) {
  const std::size_t n = w.size();
  if (n == 0) return 0;
  std::vector<std::ptrdiff_t> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    Letter sj = w[j % n];
    std::ptrdiff_t i = f[j - k - 1];
    while (i != -1 && sj != w[(k + static_cast<std::size_t>(i) + 1) % n]) {
      if (sj < w[(k + static_cast<std::size_t>(i) + 1) % n]) k = j - static_cast<std::size_t>(i) - 1;
      i = f[static_cast<std::size_t>(i)];
    }
    if (i == -1 && sj != w[(k + static_cast<std::size_t>(i) + 1) % n]) {
      if (sj < w[(k + static_cast<std::size_t>(i) + 1) % n]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return k % n;
}

inline Word least_rotation(const Word& w) { return rotate_word(w, least_rotation_index(w)); }

// Minimal period of a cyclic word; the word is root^(n/period).
inline std::size_t primitive_period(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t p = 1; p <= n / 2; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = (w[i] == w[i - p]);
    if (ok) return p;
  }
  return n;
}

struct SurfaceSignature {
  int genus = 0;
  int punctures = 0;

  int dimension() const { return 6 * genus + 2 * punctures - 6; }
  bool operator==(const SurfaceSignature&) const = default;

  void validate() const {
    if (genus < 0 || punctures < 0) throw unsupported_signature_error("negative genus or puncture count");
    if (2 - 2 * genus - punctures >= 0)
      throw unsupported_signature_error("surface must have negative Euler characteristic");
    if (dimension() <= 0)
      throw unsupported_signature_error("surface has no positive-dimensional space of multicurves");
  }
};

// Standard presentation.  Closed: <a1,b1,..,ag,bg | prod [ai,bi]>.
// Punctured: free on a1,b1,..,ag,bg,c1,..,c_{n-1}; the n peripheral words are
// c1,..,c_{n-1} and (prod [ai,bi] c1..c_{n-1})^{-1}.
class GroupPresentation {
 public:
  static GroupPresentation standard(SurfaceSignature sig) {
    sig.validate();
    GroupPresentation p;
    p.sig_ = sig;
    const int g = sig.genus, n = sig.punctures;
    p.rank_ = (n == 0) ? 2 * g : 2 * g + n - 1;
    for (int i = 0; i < g; ++i) {
      p.names_.push_back("a" + std::to_string(i + 1));
      p.names_.push_back("b" + std::to_string(i + 1));
    }
    for (int j = 0; j < std::max(0, n - 1); ++j) p.names_.push_back("c" + std::to_string(j + 1));

    Word commutators;  // prod [a_i, b_i]
    for (int i = 0; i < g; ++i) {
      Letter a = positive_letter(static_cast<unsigned>(2 * i));
      Letter b = positive_letter(static_cast<unsigned>(2 * i + 1));
      commutators.push_back(a);
      commutators.push_back(b);
      commutators.push_back(inverse_letter(a));
      commutators.push_back(inverse_letter(b));
    }
    if (n == 0) {
      p.relator_ = commutators;
      p.build_relator_tables();
    } else {
      Word tail = commutators;
      for (int j = 0; j < n - 1; ++j) {
        Letter c = positive_letter(static_cast<unsigned>(2 * g + j));
        p.peripheral_.push_back(Word{c});
        tail.push_back(c);
      }
      p.peripheral_.push_back(inverse_word(tail));
    }
    return p;
  }

  const SurfaceSignature& signature() const { return sig_; }
  int rank() const { return rank_; }
  bool closed() const { return sig_.punctures == 0; }
  const Word& relator() const { return relator_; }
  const std::vector<Word>& peripheral_words() const { return peripheral_; }
  std::size_t alphabet_size() const { return 2 * static_cast<std::size_t>(rank_); }
  bool operator==(const GroupPresentation& o) const { return sig_ == o.sig_; }

  std::string letter_name(Letter x) const {
    std::string s = names_.at(generator_of(x));
    if (is_inverse(x)) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
  }

  Letter parse_letter(std::string_view tok) const {
    if (tok.empty()) throw alphabet_error("empty word token");
    char head = tok[0];
    bool inv = std::isupper(static_cast<unsigned char>(head)) != 0;
    std::string lowered(tok);
    lowered[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(head)));
    for (std::size_t g = 0; g < names_.size(); ++g) {
      if (names_[g] == lowered) {
        Letter x = positive_letter(static_cast<unsigned>(g));
        return inv ? inverse_letter(x) : x;
      }
    }
    throw alphabet_error("unknown symbol '" + std::string(tok) + "' for this surface");
  }

  Word parse_word(std::string_view text) const {
    Word w;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) w.push_back(parse_letter(tok));
    return w;
  }

  std::string format_word(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += ' ';
      out += letter_name(w[i]);
    }
    return out;
  }

  void check_alphabet(const Word& w) const {
    for (Letter x : w)
      if (generator_of(x) >= static_cast<unsigned>(rank_))
        throw alphabet_error("letter outside alphabet of rank " + std::to_string(rank_));
  }

  // --- Dehn machinery (closed surfaces) -------------------------------------

  // Replace subwords matching more than half of a relator conjugate until the
  // cyclic word is geodesic.  Returns a cyclically reduced word.
  Word dehn_reduce_cyclic(Word w) const {
    if (!closed()) return cyclic_reduce(free_reduce(std::move(w)));
    w = cyclic_reduce(free_reduce(std::move(w)));
    bool changed = true;
    while (changed && !w.empty()) {
      changed = false;
      const std::size_t half = relator_.size() / 2;
      // search the doubled word for a match of length > half
      for (std::size_t start = 0; start < w.size() && !changed; ++start) {
        for (const Word& var : relator_variants_) {
          std::size_t len = 0;
          while (len < var.size() && len < w.size() && w[(start + len) % w.size()] == var[len]) ++len;
          if (len > half) {
            // w contains u = var[0..len); substitute u -> (var[len..])^{-1}
            Word tailinv = inverse_word(Word(var.begin() + static_cast<std::ptrdiff_t>(len), var.end()));
            Word nw;
            nw.reserve(w.size());
            for (std::size_t i = (start + len) % w.size(); i != start; i = (i + 1) % w.size())
              nw.push_back(w[i]);
            nw.insert(nw.end(), tailinv.begin(), tailinv.end());
            w = cyclic_reduce(free_reduce(std::move(nw)));
            changed = true;
            break;
          }
        }
      }
    }
    return w;
  }

  // All geodesic cyclic representatives reachable by half-relator swaps,
  // stored as least rotations.  Used for closed-surface canonical forms.
  std::vector<Word> geodesic_closure(Word w, std::size_t cap = 200000) const {
    w = dehn_reduce_cyclic(std::move(w));
    std::set<Word> seen;
    std::vector<Word> queue;
    auto push = [&](const Word& x) {
      Word lr = least_rotation(x);
      if (seen.insert(lr).second) queue.push_back(lr);
    };
    push(w);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      if (seen.size() > cap) throw needs_exact_error("closed-surface conjugacy closure exceeded cap");
      Word cur = queue[qi];
      const std::size_t half = relator_.size() / 2;
      for (std::size_t start = 0; start < cur.size(); ++start) {
        for (const Word& var : relator_variants_) {
          std::size_t len = 0;
          while (len < var.size() && len < cur.size() && cur[(start + len) % cur.size()] == var[len]) ++len;
          if (len > half) {
            // shorter representative exists: restart closure from it
            return geodesic_closure(dehn_reduce_cyclic(cur), cap);
          }
          if (len == half && half > 0 && cur.size() >= half) {
            Word tailinv = inverse_word(Word(var.begin() + static_cast<std::ptrdiff_t>(half), var.end()));
            Word nw;
            nw.reserve(cur.size());
            for (std::size_t i = (start + half) % cur.size(); i != start; i = (i + 1) % cur.size())
              nw.push_back(cur[i]);
            nw.insert(nw.end(), tailinv.begin(), tailinv.end());
            nw = cyclic_reduce(free_reduce(std::move(nw)));
            if (nw.size() == cur.size()) push(nw);
            else return geodesic_closure(dehn_reduce_cyclic(nw), cap);
          }
        }
      }
    }
    return queue;
  }

 private:
  void build_relator_tables() {
    relator_variants_.clear();
    Word r = relator_;
    Word ri = inverse_word(r);
    for (std::size_t k = 0; k < r.size(); ++k) {
      relator_variants_.push_back(rotate_word(r, k));
      relator_variants_.push_back(rotate_word(ri, k));
    }
  }

  SurfaceSignature sig_;
  int rank_ = 0;
  std::vector<std::string> names_;
  Word relator_;                        // empty when punctured
  std::vector<Word> peripheral_;        // empty when closed
  std::vector<Word> relator_variants_;  // rotations of relator and its inverse
};

// A conjugacy class of the surface group, stored canonically: for free
// presentations the lexicographically least rotation over the class (and over
// inversion when unoriented); for closed ones the least word in the geodesic
// closure.
class CyclicWord {
 public:
  CyclicWord() = default;

  static CyclicWord canonical(const GroupPresentation& pres, Word raw, bool unoriented = true) {
    pres.check_alphabet(raw);
    Word w = pres.closed() ? pres.dehn_reduce_cyclic(std::move(raw))
                           : cyclic_reduce(free_reduce(std::move(raw)));
    if (w.empty()) throw trivial_class_error("word reduces to the trivial class");
    Word best;
    if (pres.closed()) {
      for (const Word& cand : pres.geodesic_closure(w))
        if (best.empty() || cand < best) best = cand;
      if (unoriented) {
        for (const Word& cand : pres.geodesic_closure(inverse_word(w)))
          if (cand < best) best = cand;
      }
    } else {
      best = least_rotation(w);
      if (unoriented) {
        Word alt = least_rotation(inverse_word(w));
        if (alt < best) best = alt;
      }
    }
    CyclicWord out;
    out.letters_ = std::move(best);
    out.unoriented_ = unoriented;
    return out;
  }

  const Word& letters() const { return letters_; }
  bool orientation_normalized() const { return unoriented_; }
  std::size_t size() const { return letters_.size(); }
  bool operator==(const CyclicWord& o) const { return letters_ == o.letters_; }
  bool operator<(const CyclicWord& o) const { return letters_ < o.letters_; }

  // primitive root (as canonical class) and the power this word is of it
  std::pair<Word, int> primitive_root() const {
    std::size_t p = primitive_period(letters_);
    return {Word(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(p)),
            static_cast<int>(letters_.size() / p)};
  }

 private:
  Word letters_;
  bool unoriented_ = true;
};

// name-based convenience used widely in tests
inline CyclicWord cyclic_canonical(const GroupPresentation& pres, const Word& w, bool unoriented = true) {
  return CyclicWord::canonical(pres, w, unoriented);
}

}  // namespace orbitcount
