#pragma once

// Slow, obviously-correct reference computations. They work on names and
// std::set so they share no code paths with the library's bitsets,
// propagator, or enumeration helpers.

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "iim/model.hpp"

namespace oracle {

using Names = std::set<std::string>;

/// target -> list of minterms, each a set of names.
using Rules = std::map<std::string, std::vector<Names>>;

inline Rules rules_of(const iim::DependencySystem& s) {
  Rules r;
  for (const auto& eq : s.equations()) {
    auto& slot = r[s.name(eq.target)];
    for (const auto& mt : eq.minterms) {
      Names m;
      for (auto i : mt.members) m.insert(s.name(i));
      slot.push_back(m);
    }
  }
  return r;
}

inline Names universe(const iim::DependencySystem& s) {
  Names u;
  for (const auto& e : s.entities()) u.insert(e.name);
  return u;
}

/// One synchronous step: a target dies when each of its minterms has a
/// dead member.
inline Names step(const Rules& rules, const Names& dead) {
  Names next = dead;
  for (const auto& [target, minterms] : rules) {
    bool all_broken = true;
    for (const auto& mt : minterms) {
      bool broken = false;
      for (const auto& m : mt) broken = broken || dead.count(m) > 0;
      all_broken = all_broken && broken;
    }
    if (all_broken && !minterms.empty()) next.insert(target);
  }
  return next;
}

inline std::vector<Names> trace(const Rules& rules, const Names& initial) {
  std::vector<Names> steps{initial};
  for (;;) {
    auto next = step(rules, steps.back());
    if (next == steps.back()) return steps;
    steps.push_back(next);
  }
}

inline Names final_dead(const Rules& rules, const Names& initial) { return trace(rules, initial).back(); }

/// Best kill count over every attack of size <= k (bitmask enumeration).
inline std::size_t best_kill(const iim::DependencySystem& s, std::size_t k) {
  const auto rules = rules_of(s);
  const auto all = universe(s);
  std::vector<std::string> names(all.begin(), all.end());
  const auto n = names.size();
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > k) continue;
    Names seeds;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) seeds.insert(names[i]);
    best = std::max(best, final_dead(rules, seeds).size());
  }
  return best;
}

/// Reachability closure of each entity in the graph with an edge x -> y
/// for every single-literal implication y <- x. Reflexive.
inline std::map<std::string, Names> closures(const iim::DependencySystem& s) {
  std::map<std::string, Names> out_edges;
  for (const auto& [target, minterms] : rules_of(s))
    for (const auto& mt : minterms)
      for (const auto& m : mt) out_edges[m].insert(target);
  std::map<std::string, Names> result;
  for (const auto& seed : universe(s)) {
    Names seen{seed};
    std::deque<std::string> queue{seed};
    while (!queue.empty()) {
      auto x = queue.front();
      queue.pop_front();
      for (const auto& y : out_edges[x])
        if (seen.insert(y).second) queue.push_back(y);
    }
    result[seed] = seen;
  }
  return result;
}

using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

inline bool has_vertex_cover(std::size_t n, const Edges& edges, std::size_t r) {
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > r) continue;
    bool ok = true;
    for (auto [a, b] : edges) ok = ok && ((mask >> a) & 1u || (mask >> b) & 1u);
    if (ok) return true;
  }
  return false;
}

inline bool has_clique(std::size_t n, const Edges& edges, std::size_t k) {
  std::set<std::pair<std::size_t, std::size_t>> adj;
  for (auto [a, b] : edges) {
    adj.insert({a, b});
    adj.insert({b, a});
  }
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if ((mask >> i & 1u) && (mask >> j & 1u)) ok = ok && adj.count({i, j}) > 0;
    if (ok) return true;
  }
  return false;
}

/// Great-circle distance via the spherical law of cosines (a different
/// formula from the library's haversine).
inline double distance_m(double lat1, double lon1, double lat2, double lon2) {
  const double r = 6371008.8;
  const double d = M_PI / 180.0;
  double c = std::sin(lat1 * d) * std::sin(lat2 * d) +
             std::cos(lat1 * d) * std::cos(lat2 * d) * std::cos((lon2 - lon1) * d);
  c = std::max(-1.0, std::min(1.0, c));
  return r * std::acos(c);
}

}  // namespace oracle
