#pragma once

#include <stdexcept>
#include <string>

#include "nhbell/lhv.hpp"
#include "nhbell/polynomial.hpp"
#include "nhbell/probability.hpp"

namespace nhbell {

// Catalog presets. Nothing here is a hand-typed coefficient table: every
// entry is produced by the generative constructions, so the presets cannot
// drift from the algebra. The tests pin them against the published forms.

inline BellPolynomial preset_chsh1() { return chsh(1); }

// u = r = s = t = 0 collapses the family to the three-qubit MABK inequality.
inline BellPolynomial preset_mabk() {
  return three_qubit_family(FamilyParams(0, 0, 0, 0));
}

// The (u,r,s,t) = (2,8,4,4) member, published (as PI-5's correlator form)
// scaled by 2 to clear half-integer coefficients: 20 terms, bound 8.
inline BellPolynomial preset_pi5() {
  return scaled(three_qubit_family(FamilyParams(2, 8, 4, 4)), Rational(2));
}

// Site relabeling between the constructed pi5 polynomial and the published
// probability form: A->B, B->C, C->A.
inline constexpr std::array<Site, 3> kPi5SiteImage{Site::B, Site::C, Site::A};

// The Pitowsky-Svozil probability presentation of preset_pi5: relabel sites,
// expand over +1-outcome probabilities, and rescale by 1/8; K comes out 0.
inline ProbabilityForm preset_pi5_probability() {
  return scaled(
      to_probability_form(permute_sites(preset_pi5(), kPi5SiteImage)),
      Rational(1, 8));
}

inline BellPolynomial preset_ci6() { return chen_alternative(); }

// Probability presentation used for the loophole analysis. The published
// bound 4 is valid but provably loose (the vertex maximum is 7/2); threshold
// analysis must test the actual Bell inequality, so the tight bound is proven
// here by vertex enumeration and used for K.
inline ProbabilityForm preset_ci6_probability() {
  BellPolynomial p = preset_ci6();
  Rational tight = vertex_max(p).maximum;
  return to_probability_form(p.with_bound(tight));
}

inline BellPolynomial preset_polynomial(const std::string& name) {
  if (name == "chsh1") return preset_chsh1();
  if (name == "mabk") return preset_mabk();
  if (name == "pi5") return preset_pi5();
  if (name == "ci6") return preset_ci6();
  throw std::invalid_argument("unknown preset: " + name);
}

inline ProbabilityForm preset_probability(const std::string& name) {
  if (name == "pi5") return preset_pi5_probability();
  if (name == "ci6") return preset_ci6_probability();
  throw std::invalid_argument("unknown probability-form preset: " + name);
}

}  // namespace nhbell
