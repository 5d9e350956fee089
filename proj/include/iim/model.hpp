#pragma once

// Entities, live/death equations, and the dependency system that every
// analysis in the library consumes.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iim/entity_set.hpp"

namespace iim {

enum class Layer : std::uint8_t { A, B };

enum class EntityKind : std::uint8_t {
  generic,
  generator,
  load,
  transmission_line,
  cell_tower,
  fiber_building,
  fiber_link,
};

inline std::string_view to_string(Layer layer) { return layer == Layer::A ? "A" : "B"; }

inline std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::generator: return "generator";
    case EntityKind::load: return "load";
    case EntityKind::transmission_line: return "transmission_line";
    case EntityKind::cell_tower: return "cell_tower";
    case EntityKind::fiber_building: return "fiber_building";
    case EntityKind::fiber_link: return "fiber_link";
    case EntityKind::generic: break;
  }
  return "generic";
}

struct EntityId {
  Layer layer = Layer::A;
  std::string name;
  EntityKind kind = EntityKind::generic;
};

/// Leading letter or underscore, then letters, digits or underscores.
inline bool is_identifier(std::string_view s) {
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (s.empty() || !alpha(s.front())) return false;
  return std::all_of(s.begin() + 1, s.end(), [&](char c) { return alpha(c) || digit(c); });
}

/// A conjunction of supporting entities. Members are kept sorted.
struct MinTerm {
  std::vector<EntityIndex> members;
};

/// target <- m1 + m2 + ... where each mi is a MinTerm.
struct LiveEquation {
  EntityIndex target = 0;
  std::vector<MinTerm> minterms;
};

/// De Morgan dual of a LiveEquation: the target is forced dead when every
/// clause contains at least one dead member.
struct DeathEquation {
  EntityIndex target = 0;
  std::vector<std::vector<EntityIndex>> clauses;
};

class UnknownEntity : public std::out_of_range {
 public:
  explicit UnknownEntity(std::string_view name)
      : std::out_of_range("entity not in universe: " + std::string(name)) {}
};

class SystemBuilder;

/// Entity universe plus live equations. Immutable once built; entity
/// indices follow ascending name order.
class DependencySystem {
 public:
  DependencySystem() = default;

  std::size_t size() const noexcept { return entities_.size(); }
  const std::vector<EntityId>& entities() const noexcept { return entities_; }
  const EntityId& entity(EntityIndex i) const { return entities_.at(i); }
  const std::string& name(EntityIndex i) const { return entities_.at(i).name; }

  std::optional<EntityIndex> find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }
  EntityIndex index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw UnknownEntity(name);
  }

  /// Equations ordered by target index (stable for duplicate targets).
  const std::vector<LiveEquation>& equations() const noexcept { return equations_; }

  /// First equation whose target is `i`, or nullptr for root entities.
  const LiveEquation* equation_for(EntityIndex i) const {
    const auto slot = first_equation_.at(i);
    return slot < 0 ? nullptr : &equations_[static_cast<std::size_t>(slot)];
  }
  bool has_equation(EntityIndex i) const { return first_equation_.at(i) >= 0; }

  std::size_t count_layer(Layer layer) const {
    return static_cast<std::size_t>(std::count_if(
        entities_.begin(), entities_.end(), [&](const EntityId& e) { return e.layer == layer; }));
  }

  EntitySet empty_set() const { return EntitySet(size()); }

  template <typename Range>
  EntitySet make_set(const Range& names) const {
    EntitySet s(size());
    for (const auto& n : names) s.set(index_of(n));
    return s;
  }
  EntitySet make_set(std::initializer_list<std::string_view> names) const {
    EntitySet s(size());
    for (auto n : names) s.set(index_of(n));
    return s;
  }

  /// Sorted names of the members of `set`.
  std::vector<std::string> names(const EntitySet& set) const {
    std::vector<std::string> out;
    set.for_each([&](EntityIndex i) { out.push_back(entities_[i].name); });
    return out;
  }

 private:
  friend class SystemBuilder;

  std::vector<EntityId> entities_;
  std::unordered_map<std::string, EntityIndex> by_name_;
  std::vector<LiveEquation> equations_;
  std::vector<std::int32_t> first_equation_;
};

/// Accumulates entities and equations by name, then freezes them into a
/// DependencySystem. Equations are stored as written; structural problems
/// are left for validate() to report.
class SystemBuilder {
 public:
  /// Re-adding a name with the same layer is a no-op (a non-generic kind
  /// replaces a generic one); a different layer throws.
  SystemBuilder& add_entity(std::string name, Layer layer,
                            EntityKind kind = EntityKind::generic) {
    auto it = index_.find(name);
    if (it != index_.end()) {
      auto& existing = entities_[it->second];
      if (existing.layer != layer)
        throw std::invalid_argument("entity " + name + " declared in both layers");
      if (existing.kind == EntityKind::generic) existing.kind = kind;
      return *this;
    }
    index_.emplace(name, entities_.size());
    entities_.push_back(EntityId{layer, std::move(name), kind});
    return *this;
  }

  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  /// Every referenced name must already have been added.
  SystemBuilder& add_equation(const std::string& target,
                              const std::vector<std::vector<std::string>>& minterms) {
    require(target);
    RawEquation eq{target, {}};
    for (const auto& mt : minterms) {
      for (const auto& m : mt) require(m);
      eq.minterms.push_back(mt);
    }
    equations_.push_back(std::move(eq));
    return *this;
  }

  DependencySystem build() const {
    DependencySystem sys;
    sys.entities_ = entities_;
    std::sort(sys.entities_.begin(), sys.entities_.end(),
              [](const EntityId& x, const EntityId& y) { return x.name < y.name; });
    for (std::size_t i = 0; i < sys.entities_.size(); ++i)
      sys.by_name_.emplace(sys.entities_[i].name, static_cast<EntityIndex>(i));

    for (const auto& raw : equations_) {
      LiveEquation eq;
      eq.target = sys.by_name_.at(raw.target);
      for (const auto& mt : raw.minterms) {
        MinTerm term;
        for (const auto& m : mt) term.members.push_back(sys.by_name_.at(m));
        std::sort(term.members.begin(), term.members.end());
        eq.minterms.push_back(std::move(term));
      }
      sys.equations_.push_back(std::move(eq));
    }
    std::stable_sort(sys.equations_.begin(), sys.equations_.end(),
                     [](const LiveEquation& x, const LiveEquation& y) { return x.target < y.target; });
    sys.first_equation_.assign(sys.entities_.size(), -1);
    for (std::size_t k = 0; k < sys.equations_.size(); ++k) {
      auto& slot = sys.first_equation_[sys.equations_[k].target];
      if (slot < 0) slot = static_cast<std::int32_t>(k);
    }
    return sys;
  }

 private:
  struct RawEquation {
    std::string target;
    std::vector<std::vector<std::string>> minterms;
  };

  void require(const std::string& name) const {
    if (!contains(name)) throw UnknownEntity(name);
  }

  std::vector<EntityId> entities_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<RawEquation> equations_;
};

/// Rebuilds `system` with the same entities and equations, e.g. as a
/// starting point for edits.
inline SystemBuilder to_builder(const DependencySystem& system) {
  SystemBuilder b;
  for (const auto& e : system.entities()) b.add_entity(e.name, e.layer, e.kind);
  for (const auto& eq : system.equations()) {
    std::vector<std::vector<std::string>> mts;
    for (const auto& mt : eq.minterms) {
      std::vector<std::string> names;
      for (auto m : mt.members) names.push_back(system.name(m));
      mts.push_back(std::move(names));
    }
    b.add_equation(system.name(eq.target), mts);
  }
  return b;
}

/// Same universe (names and layers) and the same equations, compared as
/// sets of minterm sets.
inline bool semantically_equal(const DependencySystem& x, const DependencySystem& y) {
  if (x.size() != y.size() || x.equations().size() != y.equations().size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x.entities()[i].name != y.entities()[i].name ||
        x.entities()[i].layer != y.entities()[i].layer)
      return false;
  }
  // Indices coincide once the name lists match.
  using Shape = std::pair<EntityIndex, std::set<std::vector<EntityIndex>>>;
  auto shapes = [](const DependencySystem& s) {
    std::multiset<Shape> out;
    for (const auto& eq : s.equations()) {
      std::set<std::vector<EntityIndex>> terms;
      for (const auto& mt : eq.minterms) terms.insert(mt.members);
      out.emplace(eq.target, std::move(terms));
    }
    return out;
  };
  return shapes(x) == shapes(y);
}

// ---------------------------------------------------------------------------
// Validation

struct Issue {
  std::string entity;
  std::string reason;
};

struct ValidationReport {
  std::vector<Issue> violations;
  std::vector<Issue> warnings;

  bool ok() const noexcept { return violations.empty(); }
};

/// Reports every broken structural invariant. Same-layer dependencies are
/// violations when `strict_cross_layer` is set and warnings otherwise.
inline ValidationReport validate(const DependencySystem& system, bool strict_cross_layer) {
  ValidationReport report;
  for (const auto& e : system.entities()) {
    if (!is_identifier(e.name))
      report.violations.push_back({e.name, "invalid identifier '" + e.name + "'"});
  }

  auto term_text = [&](const MinTerm& mt) {
    std::string s;
    for (auto m : mt.members) {
      if (!s.empty()) s += '*';
      s += system.name(m);
    }
    return s;
  };

  std::vector<int> seen(system.size(), 0);
  for (const auto& eq : system.equations()) {
    const auto& target = system.name(eq.target);
    if (seen[eq.target]++ > 0)
      report.violations.push_back({target, "duplicate left-hand side " + target});
    if (eq.minterms.empty()) {
      report.violations.push_back({target, "empty right-hand side"});
      continue;
    }
    std::set<std::vector<EntityIndex>> distinct;
    const Layer target_layer = system.entity(eq.target).layer;
    std::set<EntityIndex> same_layer;
    for (const auto& mt : eq.minterms) {
      if (mt.members.empty()) {
        report.violations.push_back({target, "empty minterm"});
        continue;
      }
      if (std::adjacent_find(mt.members.begin(), mt.members.end()) != mt.members.end())
        report.violations.push_back({target, "duplicate member in minterm " + term_text(mt)});
      if (std::binary_search(mt.members.begin(), mt.members.end(), eq.target))
        report.violations.push_back({target, "target " + target + " supports itself"});
      if (!distinct.insert(mt.members).second)
        report.violations.push_back({target, "duplicate minterm " + term_text(mt)});
      for (auto m : mt.members)
        if (m != eq.target && system.entity(m).layer == target_layer) same_layer.insert(m);
    }
    for (auto m : same_layer) {
      Issue issue{target, "same-layer dependency on " + system.name(m)};
      (strict_cross_layer ? report.violations : report.warnings).push_back(std::move(issue));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Classification

enum class CaseClass : std::uint8_t { CaseI, CaseII, CaseIII, CaseIV };

inline std::string_view to_string(CaseClass c) {
  switch (c) {
    case CaseClass::CaseI: return "Case I";
    case CaseClass::CaseII: return "Case II";
    case CaseClass::CaseIII: return "Case III";
    case CaseClass::CaseIV: break;
  }
  return "Case IV";
}

/// Case I: one minterm of size one everywhere. Case II: one minterm per
/// equation, some larger than one. Case III: all minterms of size one,
/// some equation with several. Case IV: anything else.
inline CaseClass classify(const DependencySystem& system) {
  bool all_single_minterm = true;
  bool all_size_one = true;
  for (const auto& eq : system.equations()) {
    if (eq.minterms.size() != 1) all_single_minterm = false;
    for (const auto& mt : eq.minterms)
      if (mt.members.size() != 1) all_size_one = false;
  }
  if (all_single_minterm && all_size_one) return CaseClass::CaseI;
  if (all_single_minterm) return CaseClass::CaseII;
  if (all_size_one) return CaseClass::CaseIII;
  return CaseClass::CaseIV;
}

// ---------------------------------------------------------------------------
// Negation and evaluation

inline DeathEquation negate(const LiveEquation& eq) {
  DeathEquation death{eq.target, {}};
  death.clauses.reserve(eq.minterms.size());
  for (const auto& mt : eq.minterms) death.clauses.push_back(mt.members);
  return death;
}

/// True when some minterm has every member alive.
inline bool live_holds(const LiveEquation& eq, const EntitySet& alive) {
  return std::any_of(eq.minterms.begin(), eq.minterms.end(), [&](const MinTerm& mt) {
    return std::all_of(mt.members.begin(), mt.members.end(),
                       [&](EntityIndex m) { return alive.test(m); });
  });
}

/// True when every clause has a dead member.
inline bool death_holds(const DeathEquation& eq, const EntitySet& dead) {
  return std::all_of(eq.clauses.begin(), eq.clauses.end(), [&](const auto& clause) {
    return std::any_of(clause.begin(), clause.end(), [&](EntityIndex m) { return dead.test(m); });
  });
}

/// Entities with no live equation; they die only when attacked.
inline EntitySet roots(const DependencySystem& system) {
  EntitySet out(system.size());
  for (EntityIndex i = 0; i < system.size(); ++i)
    if (!system.has_equation(i)) out.set(i);
  return out;
}

}  // namespace iim
