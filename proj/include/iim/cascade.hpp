#pragma once

#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "iim/entity_set.hpp"
#include "iim/model.hpp"

namespace iim {

namespace detail {
inline void check_universe(const DependencySystem& system, const EntitySet& set) {
  if (set.universe_size() != system.size())
    throw std::invalid_argument("entity not in universe: dead-set built for another system");
}
}  // namespace detail

/// One synchronous propagation step: an entity with an equation dies when
/// every one of its minterms has a dead member.
inline EntitySet step(const DependencySystem& system, const EntitySet& dead) {
  detail::check_universe(system, dead);
  EntitySet next = dead;
  for (const auto& eq : system.equations()) {
    if (dead.test(eq.target) || eq.minterms.empty()) continue;
    bool all_broken = true;
    for (const auto& mt : eq.minterms) {
      bool broken = false;
      for (auto m : mt.members) {
        if (dead.test(m)) {
          broken = true;
          break;
        }
      }
      if (!broken) {
        all_broken = false;
        break;
      }
    }
    if (all_broken) next.set(eq.target);
  }
  return next;
}

/// Dead-sets from the initial attack (steps[0]) up to and including the
/// first fixed point.
struct CascadeTrace {
  std::vector<EntitySet> steps;
  std::size_t fixed_point_step = 0;

  const EntitySet& final_dead() const { return steps.back(); }
};

inline CascadeTrace simulate(const DependencySystem& system, const EntitySet& initial_dead) {
  detail::check_universe(system, initial_dead);
  CascadeTrace trace;
  trace.steps.push_back(initial_dead);
  for (;;) {
    EntitySet next = step(system, trace.steps.back());
    if (next == trace.steps.back()) break;
    trace.steps.push_back(std::move(next));
  }
  trace.fixed_point_step = trace.steps.size() - 1;
  return trace;
}

/// Reusable worklist propagation to the fixed point. Each newly dead
/// entity is processed once, so a run costs O(total minterm size).
/// Holds scratch buffers: use one instance per thread.
class Propagator {
 public:
  explicit Propagator(const DependencySystem& system) : size_(system.size()) {
    std::vector<std::vector<std::uint32_t>> occ(size_);
    for (const auto& eq : system.equations()) {
      const auto e = static_cast<std::uint32_t>(eq_target_.size());
      eq_target_.push_back(eq.target);
      eq_terms_.push_back(static_cast<std::uint32_t>(eq.minterms.size()));
      for (const auto& mt : eq.minterms) {
        const auto m = static_cast<std::uint32_t>(term_eq_.size());
        term_eq_.push_back(e);
        for (auto member : mt.members) occ[member].push_back(m);
      }
    }
    occ_begin_.reserve(size_ + 1);
    for (const auto& list : occ) {
      occ_begin_.push_back(static_cast<std::uint32_t>(occ_flat_.size()));
      occ_flat_.insert(occ_flat_.end(), list.begin(), list.end());
    }
    occ_begin_.push_back(static_cast<std::uint32_t>(occ_flat_.size()));
    term_dead_.resize(term_eq_.size());
    eq_broken_.resize(eq_target_.size());
    dead_.resize(size_);
    queue_.reserve(size_);
  }

  std::size_t universe_size() const noexcept { return size_; }

  /// Final dead-set for the given seeds.
  EntitySet run(const EntitySet& seeds) {
    if (seeds.universe_size() != size_)
      throw std::invalid_argument("entity not in universe: dead-set built for another system");
    reset();
    seeds.for_each([&](EntityIndex i) { kill(i); });
    drain();
    EntitySet out(size_);
    for (auto i : queue_) out.set(i);
    return out;
  }

  /// Number of dead entities at the fixed point.
  std::size_t count(std::span<const EntityIndex> seeds) {
    reset();
    for (auto i : seeds) kill(i);
    drain();
    return queue_.size();
  }

  /// Continues from the current state with extra seeds; returns the new
  /// total. Call after run() or count().
  std::size_t extend(std::span<const EntityIndex> more) {
    for (auto i : more) kill(i);
    drain();
    return queue_.size();
  }

  bool is_dead(EntityIndex i) const { return dead_[i] != 0; }

  /// Dead-set of the last run.
  EntitySet dead_set() const {
    EntitySet out(size_);
    for (auto i : queue_) out.set(i);
    return out;
  }

 private:
  void reset() {
    std::fill(term_dead_.begin(), term_dead_.end(), 0);
    std::fill(eq_broken_.begin(), eq_broken_.end(), 0);
    std::fill(dead_.begin(), dead_.end(), 0);
    queue_.clear();
    head_ = 0;
  }
  void kill(EntityIndex i) {
    if (i >= size_) throw std::out_of_range("entity not in universe");
    if (dead_[i]) return;
    dead_[i] = 1;
    queue_.push_back(i);
  }
  void drain() {
    while (head_ < queue_.size()) {
      const auto x = queue_[head_++];
      for (auto k = occ_begin_[x]; k < occ_begin_[x + 1]; ++k) {
        const auto m = occ_flat_[k];
        if (term_dead_[m]++ != 0) continue;
        const auto e = term_eq_[m];
        if (++eq_broken_[e] == eq_terms_[e]) kill(eq_target_[e]);
      }
    }
  }

  std::size_t size_;
  std::vector<EntityIndex> eq_target_;
  std::vector<std::uint32_t> eq_terms_;
  std::vector<std::uint32_t> term_eq_;
  std::vector<std::uint32_t> occ_begin_;
  std::vector<std::uint32_t> occ_flat_;

  std::vector<std::uint32_t> term_dead_;
  std::vector<std::uint32_t> eq_broken_;
  std::vector<std::uint8_t> dead_;
  std::vector<EntityIndex> queue_;
  std::size_t head_ = 0;
};

/// Dead-set at the fixed point reached from `initial_dead`.
inline EntitySet final_dead(const DependencySystem& system, const EntitySet& initial_dead) {
  detail::check_universe(system, initial_dead);
  return Propagator(system).run(initial_dead);
}

/// Table-style CSV: one row per entity, one 0/1 column per time step.
inline std::string trace_csv(const DependencySystem& system, const CascadeTrace& trace) {
  std::ostringstream out;
  out << "entity";
  for (std::size_t t = 0; t < trace.steps.size(); ++t) out << ",t" << t;
  out << '\n';
  for (EntityIndex i = 0; i < system.size(); ++i) {
    out << system.name(i);
    for (const auto& s : trace.steps) out << ',' << (s.test(i) ? 1 : 0);
    out << '\n';
  }
  return out.str();
}

}  // namespace iim
