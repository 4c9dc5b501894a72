#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <string>

#include "nhbell/polynomial.hpp"
#include "nhbell/rational.hpp"

namespace nhbell {

// One joint +1-outcome probability P(S): for every included site, the index
// of the observable measured there; 0 marks a site that does not take part.
// The empty key (pure constant) is not stored in a ProbabilityForm.
struct ProbabilityKey {
  std::array<int, 3> obs{0, 0, 0};

  friend auto operator<=>(const ProbabilityKey&, const ProbabilityKey&) = default;

  int at(Site s) const { return obs[static_cast<int>(s)]; }
  void set(Site s, int o) { obs[static_cast<int>(s)] = o; }
  bool empty() const { return obs[0] == 0 && obs[1] == 0 && obs[2] == 0; }

  std::string str() const {
    std::string out = "P(";
    bool first = true;
    for (Site s : kSites) {
      if (!at(s)) continue;
      if (!first) out += ",";
      out += site_letter(s);
      out += static_cast<char>('0' + at(s));
      first = false;
    }
    return out + ")";
  }
};

// The inequality  sum_S c_S P(S) <= K  over joint +1-outcome probabilities.
class ProbabilityForm {
 public:
  explicit ProbabilityForm(int arity = 3, Rational k = Rational(0))
      : arity_(arity), k_(std::move(k)) {
    if (arity != 2 && arity != 3)
      throw std::invalid_argument("arity must be 2 or 3");
  }

  int arity() const { return arity_; }
  const std::map<ProbabilityKey, Rational>& terms() const { return terms_; }
  const Rational& bound() const { return k_; }
  void set_bound(Rational k) { k_ = std::move(k); }

  ProbabilityForm& add_term(const ProbabilityKey& key, const Rational& c) {
    if (key.empty())
      throw std::invalid_argument("constant terms belong in the bound K");
    if (key.at(Site::C) != 0) arity_ = 3;
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      if (c != 0) terms_.emplace(key, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
    return *this;
  }

  Rational coefficient(const ProbabilityKey& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  friend bool operator==(const ProbabilityForm& a, const ProbabilityForm& b) {
    return a.arity_ == b.arity_ && a.k_ == b.k_ && a.terms_ == b.terms_;
  }

 private:
  int arity_;
  std::map<ProbabilityKey, Rational> terms_;
  Rational k_;
};

inline ProbabilityForm scaled(const ProbabilityForm& q, const Rational& k) {
  if (k <= 0) throw std::invalid_argument("scale factor must be positive");
  ProbabilityForm r(q.arity(), q.bound() * k);
  for (const auto& [key, c] : q.terms()) r.add_term(key, c * k);
  return r;
}

// Substitutes x = 2P - 1 for every observable: each monomial expands over the
// subsets of its sites (inclusion-exclusion), and the accumulated constant
// moves into K. Requires a declared bound; exact throughout.
inline ProbabilityForm to_probability_form(const BellPolynomial& p) {
  if (!p.bound())
    throw std::invalid_argument("probability form requires a declared bound");
  ProbabilityForm q(p.arity());
  Rational constant(0);
  for (const auto& [m, c] : p.terms()) {
    std::array<Site, 3> sites{};
    int n = 0;
    for (Site s : kSites)
      if (m.uses(s)) sites[n++] = s;
    for (int mask = 0; mask < (1 << n); ++mask) {
      int bits = 0;
      ProbabilityKey key;
      for (int i = 0; i < n; ++i) {
        if (mask & (1 << i)) {
          key.set(sites[i], static_cast<int>(m.at(sites[i])));
          ++bits;
        }
      }
      Rational w = c * Rational(BigInt(1) << bits) *
                   ((n - bits) % 2 ? Rational(-1) : Rational(1));
      if (key.empty())
        constant += w;
      else
        q.add_term(key, w);
    }
  }
  q.set_bound(*p.bound() - constant);
  return q;
}

// Exact inverse: P = (1 + x)/2 per participating site; the constant produced
// by the expansion folds back into the declared bound.
inline BellPolynomial from_probability_form(const ProbabilityForm& q) {
  BellPolynomial p(q.arity());
  Rational constant(0);
  for (const auto& [key, c] : q.terms()) {
    std::array<Site, 3> sites{};
    int n = 0;
    for (Site s : kSites)
      if (key.at(s)) sites[n++] = s;
    Rational base = c / Rational(BigInt(1) << n);
    for (int mask = 0; mask < (1 << n); ++mask) {
      SitedMonomial m;
      for (int i = 0; i < n; ++i)
        if (mask & (1 << i))
          m.set(sites[i], static_cast<Selector>(key.at(sites[i])));
      if (m.constant())
        constant += base;
      else
        p.add_term(m, base);
    }
  }
  return p.with_bound(q.bound() - constant);
}

}  // namespace nhbell
