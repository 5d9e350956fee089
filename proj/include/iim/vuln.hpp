#pragma once

// Solvers for the K most vulnerable nodes problem: choose at most K
// entities to attack so that the cascade's fixed point is as large as
// possible.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "iim/cascade.hpp"
#include "iim/model.hpp"
#include "iim/parallel.hpp"

namespace iim::vuln {

enum class Method : std::uint8_t { case1, brute, bnb, greedy, milp };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::case1: return "case1";
    case Method::brute: return "brute";
    case Method::bnb: return "bnb";
    case Method::greedy: return "greedy";
    case Method::milp: break;
  }
  return "milp";
}

/// Thrown when a solver is applied to a system outside its case class.
class CaseMismatch : public std::invalid_argument {
 public:
  explicit CaseMismatch(CaseClass actual)
      : std::invalid_argument("case1 solver requires Case I; system classifies " +
                              std::string(iim::to_string(actual))),
        actual_(actual) {}
  CaseClass actual() const noexcept { return actual_; }

 private:
  CaseClass actual_;
};

struct AttackResult {
  EntitySet initial_set;
  EntitySet final_dead;
  std::size_t kill_count = 0;
  Method method = Method::brute;
};

inline AttackResult make_result(const DependencySystem& system, EntitySet initial, Method method) {
  AttackResult r;
  r.final_dead = final_dead(system, initial);
  r.kill_count = r.final_dead.count();
  r.initial_set = std::move(initial);
  r.method = method;
  return r;
}

namespace detail {

/// Visits every k-combination of [lo, n) in lexicographic order.
template <typename Fn>
void for_each_combination(std::size_t lo, std::size_t n, std::size_t k, Fn&& fn) {
  if (lo + k > n) return;
  std::vector<EntityIndex> combo(k);
  for (std::size_t j = 0; j < k; ++j) combo[j] = static_cast<EntityIndex>(lo + j);
  for (;;) {
    fn(static_cast<const std::vector<EntityIndex>&>(combo));
    std::size_t j = k;
    while (j > 0 && combo[j - 1] == n - k + (j - 1)) --j;
    if (j == 0) return;
    ++combo[j - 1];
    for (auto t = j; t < k; ++t) combo[t] = combo[t - 1] + 1;
  }
}

/// Visits every k-combination of [0, n) whose smallest element is `first`.
template <typename Fn>
void combinations_with_first(std::size_t n, std::size_t k, std::size_t first, Fn&& fn) {
  if (k == 0 || first + k > n) return;
  std::vector<EntityIndex> combo(k);
  combo[0] = static_cast<EntityIndex>(first);
  for_each_combination(first + 1, n, k - 1, [&](const std::vector<EntityIndex>& rest) {
    std::copy(rest.begin(), rest.end(), combo.begin() + 1);
    fn(static_cast<const std::vector<EntityIndex>&>(combo));
  });
}

inline EntitySet to_set(std::size_t n, const std::vector<EntityIndex>& idx) {
  EntitySet s(n);
  for (auto i : idx) s.set(i);
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Case I: transitive closures

/// closures[x] is the set of entities that die when only x is attacked in
/// a Case I system: x itself plus everything reachable along y <- x edges.
struct ClosureFamily {
  std::vector<EntitySet> closures;
};

inline void require_case1(const DependencySystem& system) {
  const auto c = classify(system);
  if (c != CaseClass::CaseI) throw CaseMismatch(c);
}

inline ClosureFamily transitive_closures(const DependencySystem& system) {
  require_case1(system);
  const auto n = system.size();
  std::vector<std::vector<EntityIndex>> out_edges(n);
  for (const auto& eq : system.equations())
    out_edges[eq.minterms.front().members.front()].push_back(eq.target);

  ClosureFamily family;
  family.closures.reserve(n);
  std::deque<EntityIndex> frontier;
  for (EntityIndex seed = 0; seed < n; ++seed) {
    EntitySet reach(n);
    reach.set(seed);
    frontier.assign(1, seed);
    while (!frontier.empty()) {
      const auto x = frontier.front();
      frontier.pop_front();
      for (auto y : out_edges[x]) {
        if (!reach.test(y)) {
          reach.set(y);
          frontier.push_back(y);
        }
      }
    }
    family.closures.push_back(std::move(reach));
  }
  return family;
}

/// Pairs of seeds whose closures overlap without one containing the other.
inline std::vector<std::pair<EntityIndex, EntityIndex>> laminar_violations(const ClosureFamily& f) {
  std::vector<std::pair<EntityIndex, EntityIndex>> bad;
  for (std::size_t i = 0; i < f.closures.size(); ++i) {
    for (std::size_t j = i + 1; j < f.closures.size(); ++j) {
      const auto& a = f.closures[i];
      const auto& b = f.closures[j];
      if (a.intersects(b) && !a.is_subset_of(b) && !b.is_subset_of(a))
        bad.emplace_back(static_cast<EntityIndex>(i), static_cast<EntityIndex>(j));
    }
  }
  return bad;
}

/// Seeds of the maximal closures, ranked by (size desc, name asc). Equal
/// closures keep their smallest seed only.
inline std::vector<EntityIndex> ranked_maximal_seeds(const ClosureFamily& f) {
  const auto n = f.closures.size();
  std::vector<EntityIndex> kept;
  for (EntityIndex x = 0; x < n; ++x) {
    bool drop = false;
    for (EntityIndex y = 0; y < n && !drop; ++y) {
      if (x == y) continue;
      const auto& cx = f.closures[x];
      const auto& cy = f.closures[y];
      if (!cx.is_subset_of(cy)) continue;
      // Proper subset, or an equal closure with a smaller seed.
      if (cx != cy || y < x) drop = true;
    }
    if (!drop) kept.push_back(x);
  }
  std::stable_sort(kept.begin(), kept.end(), [&](EntityIndex a, EntityIndex b) {
    return f.closures[a].count() > f.closures[b].count();
  });
  return kept;
}

/// Polynomial optimum for Case I systems: attack the seeds of the K
/// largest maximal closures, padding with the smallest surviving names.
inline AttackResult solve_case1(const DependencySystem& system, std::size_t k) {
  const auto family = transitive_closures(system);
  {
    std::vector<int> seen(system.size(), 0);
    for (const auto& eq : system.equations())
      if (seen[eq.target]++) throw std::invalid_argument("case1 solver requires unique left-hand sides");
  }
  const auto n = system.size();
  k = std::min(k, n);
  const auto seeds = ranked_maximal_seeds(family);

  EntitySet initial(n);
  EntitySet dead(n);
  std::size_t chosen = 0;
  for (auto s : seeds) {
    if (chosen == k) break;
    initial.set(s);
    dead |= family.closures[s];
    ++chosen;
  }
  for (EntityIndex x = 0; x < n && chosen < k; ++x) {
    if (dead.test(x)) continue;
    initial.set(x);
    dead |= family.closures[x];
    ++chosen;
  }
  return make_result(system, std::move(initial), Method::case1);
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

/// Tries every attack of exactly min(K, |universe|) entities. Ties go to
/// the lexicographically smallest sorted attack. Work is split by the
/// attack's first entity; the merge keeps the result scheduling-independent.
inline AttackResult brute_force(const DependencySystem& system, std::size_t k,
                                unsigned workers = worker_count()) {
  const auto n = system.size();
  k = std::min(k, n);
  if (k == 0) return make_result(system, EntitySet(n), Method::brute);

  struct Best {
    std::size_t kills = 0;
    std::vector<EntityIndex> attack;
    bool found = false;
  };
  const std::size_t tasks = n - k + 1;
  std::vector<Best> best(tasks);
  std::vector<Propagator> props;
  const unsigned w = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), tasks));
  props.reserve(w);
  for (unsigned i = 0; i < w; ++i) props.emplace_back(system);

  parallel_tasks(tasks, w, [&](unsigned worker, std::size_t first) {
    auto& prop = props[worker];
    auto& b = best[first];
    detail::combinations_with_first(n, k, first, [&](const std::vector<EntityIndex>& combo) {
      const auto kills = prop.count(combo);
      if (!b.found || kills > b.kills) {
        b.kills = kills;
        b.attack = combo;
        b.found = true;
      }
    });
  });

  const Best* winner = nullptr;
  for (const auto& b : best) {
    if (!b.found) continue;
    if (winner == nullptr || b.kills > winner->kills) winner = &b;
  }
  return make_result(system, detail::to_set(n, winner->attack), Method::brute);
}

// ---------------------------------------------------------------------------
// Greedy

/// Adds the entity with the largest marginal gain until the budget is spent
/// or everything is dead. Ties go to the smallest name.
inline AttackResult greedy(const DependencySystem& system, std::size_t k) {
  const auto n = system.size();
  k = std::min(k, n);
  Propagator prop(system);
  std::vector<EntityIndex> chosen;
  std::size_t current = 0;
  EntitySet dead(n);
  for (std::size_t round = 0; round < k && current < n; ++round) {
    std::size_t best_total = 0;
    EntityIndex best_x = 0;
    bool found = false;
    chosen.push_back(0);
    for (EntityIndex x = 0; x < n; ++x) {
      if (dead.test(x)) continue;
      chosen.back() = x;
      const auto total = prop.count(chosen);
      if (!found || total > best_total) {
        best_total = total;
        best_x = x;
        found = true;
      }
    }
    chosen.back() = best_x;
    prop.count(chosen);
    dead = prop.dead_set();
    current = best_total;
  }
  return make_result(system, detail::to_set(n, chosen), Method::greedy);
}

// ---------------------------------------------------------------------------
// Branch and bound

/// Exact optimum by depth-first search over attacks, candidates ordered by
/// single-entity cascade size. A node with attack S and remaining
/// candidates R (alive, later in the order) is pruned when
///   min(|F(S+R)|, |F(S) + (E & F(S+R))| + min(budget left, |roots in R|))
/// cannot beat the incumbent, where F is the fixed point and E the set of
/// entities with equations. Roots only die when attacked, which makes the
/// second term admissible. The greedy result seeds the incumbent.
inline AttackResult branch_and_bound(const DependencySystem& system, std::size_t k) {
  const auto n = system.size();
  k = std::min(k, n);
  if (k == 0) return make_result(system, EntitySet(n), Method::bnb);

  Propagator prop(system);
  std::vector<std::size_t> single(n);
  for (EntityIndex x = 0; x < n; ++x) {
    const EntityIndex one[1] = {x};
    single[x] = prop.count(one);
  }
  std::vector<EntityIndex> order(n);
  std::iota(order.begin(), order.end(), EntityIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](EntityIndex a, EntityIndex b) { return single[a] > single[b]; });
  const EntitySet is_root = roots(system);
  EntitySet has_eq(n);
  has_eq.fill();
  has_eq.subtract(is_root);

  auto seed = greedy(system, k);
  std::size_t best = seed.kill_count;
  std::vector<EntityIndex> best_attack = seed.initial_set.indices();
  if (best == n) {
    auto r = make_result(system, detail::to_set(n, best_attack), Method::bnb);
    return r;
  }

  std::vector<EntityIndex> chosen;
  std::vector<EntityIndex> scratch;

  auto dfs = [&](auto&& self, std::size_t pos) -> void {
    const auto dead_count = prop.count(chosen);
    const EntitySet dead = prop.dead_set();
    if (dead_count > best) {
      best = dead_count;
      best_attack = chosen;
    }
    if (chosen.size() == k || best == n) return;

    scratch = chosen;
    std::size_t free_roots = 0;
    bool any = false;
    for (std::size_t j = pos; j < n; ++j) {
      const auto x = order[j];
      if (dead.test(x)) continue;
      any = true;
      scratch.push_back(x);
      if (is_root.test(x)) ++free_roots;
    }
    if (!any) return;
    const auto reach_count = prop.count(scratch);
    EntitySet reach = prop.dead_set();
    reach &= has_eq;
    reach |= dead;
    const auto ub2 = reach.count() + std::min(k - chosen.size(), free_roots);
    if (std::min(reach_count, ub2) <= best) return;

    for (std::size_t j = pos; j < n; ++j) {
      const auto x = order[j];
      if (dead.test(x)) continue;
      chosen.push_back(x);
      self(self, j + 1);
      chosen.pop_back();
      if (best == n) return;
    }
  };
  dfs(dfs, 0);

  std::sort(best_attack.begin(), best_attack.end());
  return make_result(system, detail::to_set(n, best_attack), Method::bnb);
}

// ---------------------------------------------------------------------------
// Subset cover

/// Pick p ground elements so that as many family members as possible lie
/// entirely inside the pick. Family members hold indices into `ground`.
struct SubsetCoverInstance {
  std::vector<std::string> ground;
  std::vector<std::vector<std::size_t>> family;
  std::size_t p = 0;
  std::size_t q = 0;
};

struct SubsetCoverResult {
  std::vector<std::size_t> chosen;
  std::size_t covered_count = 0;
  bool meets_target = false;
};

/// Exhaustive over all min(p, |S|)-element picks; ties go to the
/// lexicographically smallest pick. Supports up to 64 ground elements.
inline SubsetCoverResult solve_subset_cover(const SubsetCoverInstance& inst) {
  const auto s = inst.ground.size();
  if (s > 64) throw std::invalid_argument("subset cover oracle supports at most 64 elements");
  std::vector<std::uint64_t> masks;
  for (const auto& member : inst.family) {
    std::uint64_t m = 0;
    for (auto e : member) {
      if (e >= s) throw std::out_of_range("family member references unknown element");
      m |= std::uint64_t{1} << e;
    }
    masks.push_back(m);
  }
  const auto p = std::min(inst.p, s);

  SubsetCoverResult best;
  bool found = false;
  std::vector<std::size_t> combo(p);
  std::iota(combo.begin(), combo.end(), std::size_t{0});
  for (;;) {
    std::uint64_t pick = 0;
    for (auto e : combo) pick |= std::uint64_t{1} << e;
    std::size_t covered = 0;
    for (auto m : masks)
      if ((m & ~pick) == 0) ++covered;
    if (!found || covered > best.covered_count) {
      best.covered_count = covered;
      best.chosen = combo;
      found = true;
    }
    std::size_t j = p;
    while (j > 0 && combo[j - 1] == s - p + (j - 1)) --j;
    if (j == 0) break;
    ++combo[j - 1];
    for (auto t = j; t < p; ++t) combo[t] = combo[t - 1] + 1;
  }
  best.meets_target = best.covered_count >= inst.q;
  return best;
}

// ---------------------------------------------------------------------------
// Dispatch and sweeps

/// case1 for Case I systems, branch and bound otherwise.
inline Method auto_method(const DependencySystem& system) {
  return classify(system) == CaseClass::CaseI ? Method::case1 : Method::bnb;
}

inline AttackResult solve(const DependencySystem& system, std::size_t k, Method method) {
  switch (method) {
    case Method::case1: return solve_case1(system, k);
    case Method::brute: return brute_force(system, k);
    case Method::bnb: return branch_and_bound(system, k);
    case Method::greedy: return greedy(system, k);
    case Method::milp: break;
  }
  throw std::invalid_argument("no in-process solver for method milp");
}

struct SweepPoint {
  std::size_t k = 0;
  std::size_t kill_count = 0;
  EntitySet initial_set;
};

/// Kill counts for every budget 0..k_max.
inline std::vector<SweepPoint> sweep(const DependencySystem& system, std::size_t k_max,
                                     Method method) {
  if (k_max > system.size())
    throw std::invalid_argument("k_max " + std::to_string(k_max) + " exceeds universe size " +
                                std::to_string(system.size()));
  if (method == Method::case1) require_case1(system);
  std::vector<SweepPoint> out;
  for (std::size_t k = 0; k <= k_max; ++k) {
    auto r = solve(system, k, method);
    out.push_back({k, r.kill_count, std::move(r.initial_set)});
  }
  return out;
}

inline std::string join_names(const DependencySystem& system, const EntitySet& set, char sep) {
  std::string s;
  set.for_each([&](EntityIndex i) {
    if (!s.empty()) s += sep;
    s += system.name(i);
  });
  return s;
}

inline std::string sweep_csv(const DependencySystem& system, const std::vector<SweepPoint>& points) {
  std::string out = "k,kill_count,initial_set\n";
  for (const auto& p : points)
    out += std::to_string(p.k) + ',' + std::to_string(p.kill_count) + ',' +
           join_names(system, p.initial_set, ';') + '\n';
  return out;
}

}  // namespace iim::vuln
