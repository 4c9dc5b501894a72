#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "nhbell/rational.hpp"

namespace nhbell {

enum class Site : int { A = 0, B = 1, C = 2 };

inline constexpr std::array<Site, 3> kSites{Site::A, Site::B, Site::C};

inline char site_letter(Site s) { return "ABC"[static_cast<int>(s)]; }

// Which of the two dichotomic observables of a site enters a monomial.
// Identity means the site does not participate.
enum class Selector : int { Identity = 0, Obs1 = 1, Obs2 = 2 };

// One multilinear monomial: at most one observable factor per site. The
// all-identity monomial is the constant 1. Ordering is lexicographic by site
// then selector, which fixes a canonical term order for the whole library
// (serialized polynomials are byte-stable across runs).
struct SitedMonomial {
  std::array<Selector, 3> sel{Selector::Identity, Selector::Identity,
                              Selector::Identity};

  friend auto operator<=>(const SitedMonomial&, const SitedMonomial&) = default;

  Selector at(Site s) const { return sel[static_cast<int>(s)]; }
  void set(Site s, Selector v) { sel[static_cast<int>(s)] = v; }

  bool constant() const {
    return sel[0] == Selector::Identity && sel[1] == Selector::Identity &&
           sel[2] == Selector::Identity;
  }
  bool uses(Site s) const { return at(s) != Selector::Identity; }

  static SitedMonomial unit() { return {}; }
  static SitedMonomial observable(Site s, int obs) {
    if (obs != 1 && obs != 2)
      throw std::invalid_argument("observable index must be 1 or 2");
    SitedMonomial m;
    m.set(s, static_cast<Selector>(obs));
    return m;
  }

  std::string str() const {
    if (constant()) return "1";
    std::string out;
    for (Site s : kSites) {
      if (!uses(s)) continue;
      out += static_cast<char>('a' + static_cast<int>(s));
      out += static_cast<char>('0' + static_cast<int>(at(s)));
    }
    return out;
  }
};

// Flat index 0..5 for the six possible observables a1,a2,b1,b2,c1,c2.
inline int observable_index(Site s, int obs) {
  return 2 * static_cast<int>(s) + (obs - 1);
}

// Values assigned to observables when evaluating a polynomial. Entries are
// optional so that evaluating a polynomial which references an unassigned
// observable is an error rather than a silent zero.
struct Assignment {
  std::array<std::optional<Rational>, 6> value;

  void set(Site s, int obs, const Rational& v) {
    value[observable_index(s, obs)] = v;
  }
  const Rational& get(Site s, int obs) const {
    const auto& v = value[observable_index(s, obs)];
    if (!v)
      throw std::invalid_argument("assignment missing observable " +
                                  std::string(1, site_letter(s)) +
                                  std::to_string(obs));
    return *v;
  }
};

// Correlator polynomial with exact rational coefficients and an optional
// declared classical bound. Equality compares arity and terms only: the bound
// is metadata about an inequality, not part of the algebra, and arithmetic
// results carry no bound.
class BellPolynomial {
 public:
  explicit BellPolynomial(int arity = 2) : arity_(arity) {
    if (arity != 2 && arity != 3)
      throw std::invalid_argument("arity must be 2 or 3");
  }

  int arity() const { return arity_; }
  const std::map<SitedMonomial, Rational>& terms() const { return terms_; }
  const std::optional<Rational>& bound() const { return bound_; }

  BellPolynomial with_bound(Rational b) const {
    BellPolynomial p = *this;
    p.bound_ = std::move(b);
    return p;
  }
  BellPolynomial without_bound() const {
    BellPolynomial p = *this;
    p.bound_.reset();
    return p;
  }

  Rational coefficient(const SitedMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Rational constant_term() const { return coefficient(SitedMonomial::unit()); }

  bool references(Site s) const {
    for (const auto& [m, c] : terms_)
      if (m.uses(s)) return true;
    return false;
  }

  // Zero coefficients are never stored; monomials touching site C promote the
  // arity to 3.
  BellPolynomial& add_term(const SitedMonomial& m, const Rational& c) {
    if (m.uses(Site::C)) arity_ = 3;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      if (c != 0) terms_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
    return *this;
  }

  BellPolynomial& operator+=(const BellPolynomial& o) {
    arity_ = std::max(arity_, o.arity_);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    bound_.reset();
    return *this;
  }
  BellPolynomial& operator-=(const BellPolynomial& o) {
    arity_ = std::max(arity_, o.arity_);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    bound_.reset();
    return *this;
  }
  BellPolynomial& operator*=(const Rational& k) {
    if (k == 0) {
      terms_.clear();
    } else {
      for (auto& [m, c] : terms_) c *= k;
    }
    bound_.reset();
    return *this;
  }

  friend BellPolynomial operator+(BellPolynomial a, const BellPolynomial& b) {
    a += b;
    return a;
  }
  friend BellPolynomial operator-(BellPolynomial a, const BellPolynomial& b) {
    a -= b;
    return a;
  }
  friend BellPolynomial operator*(BellPolynomial a, const Rational& k) {
    a *= k;
    return a;
  }
  friend BellPolynomial operator*(const Rational& k, BellPolynomial a) {
    a *= k;
    return a;
  }

  // Multilinear product. Defined only when no term pair puts two observable
  // factors on the same site; such a product would leave the representable
  // space.
  friend BellPolynomial operator*(const BellPolynomial& a,
                                  const BellPolynomial& b) {
    BellPolynomial r(std::max(a.arity_, b.arity_));
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        SitedMonomial m;
        for (Site s : kSites) {
          if (ma.uses(s) && mb.uses(s))
            throw std::invalid_argument(
                "product is not multilinear: both factors use site " +
                std::string(1, site_letter(s)));
          m.set(s, ma.uses(s) ? ma.at(s) : mb.at(s));
        }
        r.add_term(m, ca * cb);
      }
    }
    return r;
  }

  friend bool operator==(const BellPolynomial& a, const BellPolynomial& b) {
    return a.arity_ == b.arity_ && a.terms_ == b.terms_;
  }

  static BellPolynomial constant(const Rational& c, int arity = 2) {
    BellPolynomial p(arity);
    p.add_term(SitedMonomial::unit(), c);
    return p;
  }
  static BellPolynomial observable(Site s, int obs) {
    BellPolynomial p(s == Site::C ? 3 : 2);
    p.add_term(SitedMonomial::observable(s, obs), Rational(1));
    return p;
  }

 private:
  int arity_;
  std::map<SitedMonomial, Rational> terms_;
  std::optional<Rational> bound_;
};

inline Rational evaluate(const BellPolynomial& p, const Assignment& a) {
  Rational total(0);
  for (const auto& [m, c] : p.terms()) {
    Rational v = c;
    for (Site s : kSites)
      if (m.uses(s)) v *= a.get(s, static_cast<int>(m.at(s)));
    total += v;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Named constructions
// ---------------------------------------------------------------------------

// The four CHSH polynomials. E_k flips the sign of the k-th product relative
// to -(a1b1 + a1b2 + a2b1 + a2b2); each has classical bound 2.
inline BellPolynomial chsh(int k) {
  if (k < 1 || k > 4) throw std::invalid_argument("chsh index must be 1..4");
  static constexpr int kSign[4][4] = {{+1, -1, -1, -1},
                                      {-1, +1, -1, -1},
                                      {-1, -1, +1, -1},
                                      {-1, -1, -1, +1}};
  BellPolynomial p(2);
  int idx = 0;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      SitedMonomial m;
      m.set(Site::A, static_cast<Selector>(i));
      m.set(Site::B, static_cast<Selector>(j));
      p.add_term(m, Rational(kSign[k - 1][idx++]));
    }
  }
  return p.with_bound(Rational(2));
}

// (1 +/- x)/2 for a single observable. Non-negative on the solid cube, a
// rank-one projector once observables become spin operators.
inline BellPolynomial projector(Site site, int obs, int sign) {
  if (sign != +1 && sign != -1)
    throw std::invalid_argument("projector sign must be +1 or -1");
  BellPolynomial p(site == Site::C ? 3 : 2);
  p.add_term(SitedMonomial::unit(), Rational(1, 2));
  p.add_term(SitedMonomial::observable(site, obs), Rational(sign, 2));
  return p;
}

// E1 - r * P_{a2}^+ P_{b2}^+, classical bound still 2 for every r >= 0.
inline BellPolynomial e_prime(const Rational& r) {
  if (r < 0) throw std::invalid_argument("e_prime requires r >= 0");
  BellPolynomial p = chsh(1) - r * (projector(Site::A, 2, +1) *
                                    projector(Site::B, 2, +1));
  return p.with_bound(Rational(2));
}

// E4 - s * P_{a1}^+ P_{b2}^+ - t * P_{a2}^+ P_{b1}^+, classical bound 2.
inline BellPolynomial e_double_prime(const Rational& s, const Rational& t) {
  if (s < 0 || t < 0)
    throw std::invalid_argument("e_double_prime requires s, t >= 0");
  BellPolynomial p =
      chsh(4) - s * (projector(Site::A, 1, +1) * projector(Site::B, 2, +1)) -
      t * (projector(Site::A, 2, +1) * projector(Site::B, 1, +1));
  return p.with_bound(Rational(2));
}

struct FamilyParams {
  Rational u, r, s, t;

  FamilyParams(Rational u_, Rational r_, Rational s_, Rational t_)
      : u(std::move(u_)), r(std::move(r_)), s(std::move(s_)), t(std::move(t_)) {
    if (u < 0 || r < 0 || s < 0 || t < 0)
      throw std::invalid_argument("family parameters must be >= 0");
  }
};

// Three-qubit generative construction F*c1 + G*c2 + H with
//   F = (2+u)/4 E4 + E'/2 + u/2,
//   G = (E'' - E')/2,
//   H = -(2+u)/4 E4 + E''/2 + u/2,
// declared bound 2+u. Reducing site C at (c1,c2) = (+,+), (+,-), (-,-), (-,+)
// recovers E''+u, E'+u, -(2+u)E4/2 and -(2+u)E4/2 + E'' - E' exactly.
inline BellPolynomial three_qubit_family(const FamilyParams& p) {
  const Rational& u = p.u;
  BellPolynomial e4 = chsh(4);
  BellPolynomial ep = e_prime(p.r);
  BellPolynomial epp = e_double_prime(p.s, p.t);
  BellPolynomial half = BellPolynomial::constant(u / 2);

  BellPolynomial f = (Rational(2) + u) / 4 * e4 + Rational(1, 2) * ep + half;
  BellPolynomial g = Rational(1, 2) * (epp - ep);
  BellPolynomial h =
      -((Rational(2) + u) / 4) * e4 + Rational(1, 2) * epp + half;

  BellPolynomial out = f * BellPolynomial::observable(Site::C, 1) +
                       g * BellPolynomial::observable(Site::C, 2) + h;
  return out.with_bound(Rational(2) + u);
}

// Substitutes the two observables of one site by values v1, v2 in {-1,+1}
// independently (the same-value overload below is sugar). The site must be
// referenced.
inline BellPolynomial reduce(const BellPolynomial& p, Site site, int v1,
                             int v2) {
  if ((v1 != 1 && v1 != -1) || (v2 != 1 && v2 != -1))
    throw std::invalid_argument("reduce accepts only +1/-1 substitutions");
  if (!p.references(site))
    throw std::invalid_argument(std::string("polynomial does not reference site ") +
                                site_letter(site));
  BellPolynomial r(2);
  for (const auto& [m, c] : p.terms()) {
    SitedMonomial nm = m;
    Rational nc = c;
    if (m.uses(site)) {
      nc *= Rational(m.at(site) == Selector::Obs1 ? v1 : v2);
      nm.set(site, Selector::Identity);
    }
    r.add_term(nm, nc);
  }
  return r;
}

inline BellPolynomial reduce(const BellPolynomial& p, Site site, int v) {
  return reduce(p, site, v, v);
}

// Relabels sites; image[s] is the new home of site s. Coefficients unchanged.
inline BellPolynomial permute_sites(const BellPolynomial& p,
                                    const std::array<Site, 3>& image) {
  bool seen[3] = {false, false, false};
  for (Site s : kSites) seen[static_cast<int>(image[static_cast<int>(s)])] = true;
  if (!(seen[0] && seen[1] && seen[2]))
    throw std::invalid_argument("site permutation must be a bijection");
  BellPolynomial r(p.arity());
  for (const auto& [m, c] : p.terms()) {
    SitedMonomial nm;
    for (Site s : kSites) nm.set(image[static_cast<int>(s)], m.at(s));
    r.add_term(nm, c);
  }
  return p.bound() ? r.with_bound(*p.bound()) : r;
}

// Moves any constant term into the declared bound: c + q <= B iff q <= B - c.
inline BellPolynomial normalized(const BellPolynomial& p) {
  if (!p.bound())
    throw std::invalid_argument("normalize requires a declared bound");
  Rational c = p.constant_term();
  BellPolynomial r = p.without_bound();
  r.add_term(SitedMonomial::unit(), -c);
  return r.with_bound(*p.bound() - c);
}

// Scales terms and bound together; only positive factors preserve the
// direction of the inequality.
inline BellPolynomial scaled(const BellPolynomial& p, const Rational& k) {
  if (k <= 0) throw std::invalid_argument("scale factor must be positive");
  BellPolynomial r = p.without_bound();
  r *= k;
  return p.bound() ? r.with_bound(*p.bound() * k) : r;
}

// Alternative three-qubit construction: the reduced polynomials at
// (c1,c2) = (+,+), (-,+), (-,-) are pinned to
//   2 - P_{a1}^+ P_{b2}^+ - P_{a2}^+ P_{b1}^+,
//   E4,
//   2 - P_{a1}^- P_{b1}^- - P_{a2}^- P_{b2}^-,
// all bounded by 2 but only the middle one a genuine Bell inequality. Solving
// for F, G, H and assembling gives a non-homogeneous inequality whose
// published form carries bound 4; the exact vertex maximum of the assembled
// polynomial is 7/2, so the declared bound is valid but not tight
// (vertex_max recovers the tight value).
inline BellPolynomial chen_alternative() {
  BellPolynomial two = BellPolynomial::constant(Rational(2));
  BellPolynomial eq1 =
      two - projector(Site::A, 1, +1) * projector(Site::B, 2, +1) -
      projector(Site::A, 2, +1) * projector(Site::B, 1, +1);
  BellPolynomial eq2 = chsh(4).without_bound();
  BellPolynomial eq3 =
      two - projector(Site::A, 1, -1) * projector(Site::B, 1, -1) -
      projector(Site::A, 2, -1) * projector(Site::B, 2, -1);

  BellPolynomial f = Rational(1, 2) * (eq1 - eq2);
  BellPolynomial h = Rational(1, 2) * (eq1 + eq3);
  BellPolynomial g = eq1 - f - h;

  BellPolynomial out = f * BellPolynomial::observable(Site::C, 1) +
                       g * BellPolynomial::observable(Site::C, 2) + h;
  // The published inequality is stated constant-free with bound 4: fold the
  // constant out first, then attach the published bound.
  out.add_term(SitedMonomial::unit(), -out.constant_term());
  return out.with_bound(Rational(4));
}

}  // namespace nhbell
