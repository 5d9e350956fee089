#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "iim/model.hpp"

namespace iim::ingest {

struct RandomSystemSpec {
  std::uint64_t seed = 1;
  std::size_t n = 4;  // layer A entities a1..an
  std::size_t m = 4;  // layer B entities b1..bm
  CaseClass case_class = CaseClass::CaseIV;
  std::size_t max_minterms = 3;
  std::size_t max_size = 3;
  unsigned equation_percent = 75;  // chance that an entity gets an equation
};

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [lo, hi]. Modulo reduction keeps the stream identical
  /// across standard library implementations.
  std::size_t between(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
  }
  /// k distinct values from [0, n), sorted.
  std::vector<std::size_t> sample(std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[between(i, n - 1)]);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

/// Seeded cross-layer system that classifies exactly as requested.
/// Case I forces single-literal equations; the other classes need the
/// corresponding limit of at least 2 and a layer with two entities.
inline DependencySystem random_system(const RandomSystemSpec& spec) {
  if (spec.n == 0 || spec.m == 0) throw std::invalid_argument("random_system needs n, m >= 1");
  std::size_t max_minterms = std::max<std::size_t>(1, spec.max_minterms);
  std::size_t max_size = std::max<std::size_t>(1, spec.max_size);
  switch (spec.case_class) {
    case CaseClass::CaseI: max_minterms = max_size = 1; break;
    case CaseClass::CaseII: max_minterms = 1; break;
    case CaseClass::CaseIII: max_size = 1; break;
    case CaseClass::CaseIV: break;
  }
  const bool need_size = spec.case_class == CaseClass::CaseII || spec.case_class == CaseClass::CaseIV;
  const bool need_terms = spec.case_class == CaseClass::CaseIII || spec.case_class == CaseClass::CaseIV;
  if ((need_size && max_size < 2) || (need_terms && max_minterms < 2))
    throw std::invalid_argument("limits too small for the requested case");
  if ((need_size || need_terms) && spec.n < 2 && spec.m < 2)
    throw std::invalid_argument("requested case needs a layer with at least two entities");

  detail::Rng rng(spec.seed);
  std::vector<std::string> a_names, b_names;
  for (std::size_t i = 1; i <= spec.n; ++i) a_names.push_back("a" + std::to_string(i));
  for (std::size_t i = 1; i <= spec.m; ++i) b_names.push_back("b" + std::to_string(i));

  // Per target: list of minterms as indices into the other layer.
  using Terms = std::vector<std::vector<std::size_t>>;
  std::vector<Terms> eqs(spec.n + spec.m);
  auto other_size = [&](std::size_t t) { return t < spec.n ? spec.m : spec.n; };

  for (std::size_t t = 0; t < eqs.size(); ++t) {
    if (rng.between(1, 100) > spec.equation_percent) continue;
    const auto pool = other_size(t);
    const auto count = rng.between(1, max_minterms);
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t j = 0; j < count; ++j) {
      const auto size = rng.between(1, std::min(max_size, pool));
      auto term = rng.sample(pool, size);
      if (seen.insert(term).second) eqs[t].push_back(std::move(term));
    }
  }

  auto shape = [&] {
    bool multi = false, wide = false;
    for (const auto& e : eqs) {
      if (e.size() > 1) multi = true;
      for (const auto& mt : e)
        if (mt.size() > 1) wide = true;
    }
    return std::make_pair(multi, wide);
  };
  auto [multi, wide] = shape();
  if ((need_size && !wide) || (need_terms && !multi)) {
    // Overwrite one equation whose other layer has room for the required shape.
    std::size_t t = rng.between(0, eqs.size() - 1);
    while (other_size(t) < 2) t = (t + 1) % eqs.size();
    const auto pool = other_size(t);
    if (spec.case_class == CaseClass::CaseII) {
      eqs[t] = {rng.sample(pool, 2)};
    } else if (spec.case_class == CaseClass::CaseIII) {
      auto two = rng.sample(pool, 2);
      eqs[t] = {{two[0]}, {two[1]}};
    } else {
      auto two = rng.sample(pool, 2);
      eqs[t] = {two, {two[rng.between(0, 1)]}};
    }
  }

  SystemBuilder b;
  for (const auto& a : a_names) b.add_entity(a, Layer::A);
  for (const auto& x : b_names) b.add_entity(x, Layer::B);
  for (std::size_t t = 0; t < eqs.size(); ++t) {
    if (eqs[t].empty()) continue;
    const bool is_a = t < spec.n;
    const auto& target = is_a ? a_names[t] : b_names[t - spec.n];
    const auto& other = is_a ? b_names : a_names;
    std::vector<std::vector<std::string>> mts;
    for (const auto& mt : eqs[t]) {
      std::vector<std::string> names;
      for (auto i : mt) names.push_back(other[i]);
      mts.push_back(std::move(names));
    }
    b.add_equation(target, mts);
  }
  return b.build();
}

inline DependencySystem random_system(std::uint64_t seed, std::size_t n, std::size_t m, CaseClass c,
                                      std::size_t max_minterms = 3, std::size_t max_size = 3) {
  RandomSystemSpec spec;
  spec.seed = seed;
  spec.n = n;
  spec.m = m;
  spec.case_class = c;
  spec.max_minterms = max_minterms;
  spec.max_size = max_size;
  return random_system(spec);
}

}  // namespace iim::ingest
