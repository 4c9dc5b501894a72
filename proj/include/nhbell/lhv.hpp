#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nhbell/polynomial.hpp"
#include "nhbell/rational.hpp"

namespace nhbell {

// A deterministic local strategy: one value in {-1,+1} per referenced
// observable. LHV expectation values are convex mixtures of these, so a
// multilinear polynomial attains its maximum over all LHV models at one of
// them; enumerating at most 2^6 = 64 vertices is exact and instant.
struct VertexAssignment {
  std::array<int, 6> value{0, 0, 0, 0, 0, 0};
  std::array<bool, 6> referenced{false, false, false, false, false, false};

  int get(Site s, int obs) const { return value[observable_index(s, obs)]; }

  std::string str() const {
    std::string out;
    for (int i = 0; i < 6; ++i) {
      if (!referenced[i]) continue;
      if (!out.empty()) out += " ";
      out += static_cast<char>('a' + i / 2);
      out += static_cast<char>('1' + i % 2);
      out += value[i] > 0 ? "=+1" : "=-1";
    }
    return out;
  }
};

struct LhvBoundResult {
  Rational maximum;
  VertexAssignment witness;
  std::uint64_t vertices_examined = 0;
};

// Exact maximum over all vertex assignments, with the first attaining witness
// in canonical order (observables a1,a2,b1,b2,c1,c2; +1 enumerated before -1)
// so ties resolve reproducibly.
inline LhvBoundResult vertex_max(const BellPolynomial& p) {
  std::vector<int> obs;  // flat observable indices, ascending
  for (const auto& [m, c] : p.terms())
    for (Site s : kSites)
      if (m.uses(s)) {
        int idx = observable_index(s, static_cast<int>(m.at(s)));
        if (std::find(obs.begin(), obs.end(), idx) == obs.end())
          obs.push_back(idx);
      }
  std::sort(obs.begin(), obs.end());

  LhvBoundResult best;
  bool have = false;
  const std::size_t k = obs.size();
  for (std::uint64_t code = 0; code < (std::uint64_t(1) << k); ++code) {
    Assignment a;
    VertexAssignment v;
    for (std::size_t j = 0; j < k; ++j) {
      int val = (code >> j) & 1 ? -1 : +1;  // +1 first
      v.value[obs[j]] = val;
      v.referenced[obs[j]] = true;
      a.value[obs[j]] = Rational(val);
    }
    Rational value = evaluate(p, a);
    if (!have || value > best.maximum) {
      best.maximum = value;
      best.witness = v;
      have = true;
    }
  }
  best.vertices_examined = std::uint64_t(1) << k;
  if (!have) best.maximum = Rational(0);  // zero polynomial
  return best;
}

struct BoundCheck {
  bool holds = false;
  LhvBoundResult result;
};

inline BoundCheck verify_declared_bound(const BellPolynomial& p) {
  if (!p.bound())
    throw std::invalid_argument("polynomial has no declared bound");
  BoundCheck out;
  out.result = vertex_max(p);
  out.holds = out.result.maximum <= *p.bound();
  return out;
}

// The four parameter constraints under which the generative three-qubit
// construction keeps its declared bound 2+u tight:
//   r <= 4 + 2u,  r - s <= 2u,  r - t <= 2u,  r - s - t <= 0.
struct ConstraintCheck {
  std::array<bool, 4> holds{};

  static constexpr std::array<const char*, 4> kNames{
      "r <= 4 + 2u", "r - s <= 2u", "r - t <= 2u", "r - s - t <= 0"};

  bool all() const { return holds[0] && holds[1] && holds[2] && holds[3]; }

  std::vector<std::string> violated() const {
    std::vector<std::string> out;
    for (int i = 0; i < 4; ++i)
      if (!holds[i]) out.emplace_back(kNames[i]);
    return out;
  }
};

inline ConstraintCheck check_constraints(const FamilyParams& p) {
  ConstraintCheck c;
  c.holds[0] = p.r <= 4 + 2 * p.u;
  c.holds[1] = p.r - p.s <= 2 * p.u;
  c.holds[2] = p.r - p.t <= 2 * p.u;
  c.holds[3] = p.r - p.s - p.t <= 0;
  return c;
}

}  // namespace nhbell
