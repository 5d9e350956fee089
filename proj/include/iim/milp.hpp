#pragma once

// Time-expanded 0/1 integer program for the K most vulnerable nodes
// problem, exported in LP text format for external MILP solvers.
//
// x_<e>_t<t> = 1 when entity e is dead at step t, for t = 0..H-1 with
// H = |universe|, the longest possible cascade. Constraints:
//   budget          sum_e x_e_t0 <= K
//   mono_<e>_t<t>   x_e_t - x_e_t(t-1) >= 0
//   dep_<e>_t<t>    coupling of e's death at t to its supporters at t-1
//   aux_<e>_m<j>_t<t>  minterm j of e broken at t (Case IV systems only)
// Every coupling carries a +c*x_e_t0 term so an attacked entity stays
// feasible while its supporters are alive.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "iim/cascade.hpp"
#include "iim/model.hpp"
#include "iim/vuln.hpp"

namespace iim::milp {

enum class VarRole : std::uint8_t { state, aux };

struct MilpVar {
  std::string name;
  VarRole role = VarRole::state;
  EntityIndex entity = 0;
  std::size_t minterm = 0;  // 1-based for aux variables, 0 for state
  std::size_t step = 0;
};

struct Term {
  std::int64_t coeff = 0;
  std::size_t var = 0;
};

enum class Sense : std::uint8_t { le, ge };

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::le;
  std::int64_t rhs = 0;
};

/// How an equation's death condition is linearised.
enum class Coupling : std::uint8_t {
  any_member,      // x(t) <= sum members(t-1) + x(0)
  all_literals,    // T x(t) <= sum literals(t-1) + T x(0)
  per_minterm_aux, // m_j(t) <= sum members_j(t-1) + x(0); T x(t) <= sum m_j(t) + T x(0)
};

struct MilpModel {
  std::vector<MilpVar> variables;  // state variables first, entity-major
  std::vector<std::size_t> objective;  // maximise the sum of these
  std::vector<Constraint> constraints;
  std::size_t budget = 0;
  std::size_t horizon = 0;
  std::size_t entity_count = 0;
  std::size_t layer_a = 0;  // n
  std::size_t layer_b = 0;  // m

  std::size_t state(EntityIndex e, std::size_t t) const { return e * horizon + t; }
  std::size_t state_count() const { return entity_count * horizon; }
  std::size_t aux_count() const { return variables.size() - state_count(); }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t add_var(MilpVar v) {
    const auto id = variables.size();
    if (!index_.emplace(v.name, id).second)
      throw std::logic_error("duplicate variable name " + v.name);
    variables.push_back(std::move(v));
    return id;
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

inline Coupling coupling_for(CaseClass system_class, const LiveEquation& eq) {
  if (eq.minterms.size() <= 1) return Coupling::any_member;
  return system_class == CaseClass::CaseIII ? Coupling::all_literals : Coupling::per_minterm_aux;
}

namespace detail {

/// Merges repeated variables and drops zero coefficients.
inline std::vector<Term> normalize(std::vector<Term> terms) {
  std::map<std::size_t, std::int64_t> acc;
  for (const auto& t : terms) acc[t.var] += t.coeff;
  std::vector<Term> out;
  for (const auto& [v, c] : acc)
    if (c != 0) out.push_back({c, v});
  // Keep the constrained (latest) variable first for readability.
  std::stable_sort(out.begin(), out.end(), [](const Term& a, const Term& b) {
    return (a.coeff > 0) > (b.coeff > 0);
  });
  return out;
}

}  // namespace detail

inline MilpModel build_model(const DependencySystem& system, std::size_t k) {
  MilpModel model;
  const auto n = system.size();
  model.budget = k;
  model.horizon = n;
  model.entity_count = n;
  model.layer_a = system.count_layer(Layer::A);
  model.layer_b = system.count_layer(Layer::B);
  const auto H = model.horizon;

  for (EntityIndex e = 0; e < n; ++e)
    for (std::size_t t = 0; t < H; ++t)
      model.add_var({"x_" + system.name(e) + "_t" + std::to_string(t), VarRole::state, e, 0, t});

  for (EntityIndex e = 0; e < n; ++e) model.objective.push_back(model.state(e, H - 1));

  {
    Constraint budget{"budget", {}, Sense::le, static_cast<std::int64_t>(k)};
    for (EntityIndex e = 0; e < n; ++e) budget.terms.push_back({1, model.state(e, 0)});
    model.constraints.push_back(std::move(budget));
  }

  const auto system_class = classify(system);
  for (EntityIndex e = 0; e < n; ++e) {
    const auto& ename = system.name(e);
    const LiveEquation* eq = system.equation_for(e);
    const Coupling coupling = eq ? coupling_for(system_class, *eq) : Coupling::any_member;
    const auto T = eq ? static_cast<std::int64_t>(eq->minterms.size()) : 0;

    for (std::size_t t = 1; t < H; ++t) {
      const auto st = "_t" + std::to_string(t);
      model.constraints.push_back(
          {"mono_" + ename + st, {{1, model.state(e, t)}, {-1, model.state(e, t - 1)}}, Sense::ge, 0});
      if (!eq || eq->minterms.empty()) {
        // No supporters: the entity is dead at t only if attacked at t0.
        model.constraints.push_back(
            {"dep_" + ename + st, {{1, model.state(e, t)}, {-1, model.state(e, 0)}}, Sense::le, 0});
        continue;
      }

      std::vector<Term> dep;
      switch (coupling) {
        case Coupling::any_member:
          dep.push_back({1, model.state(e, t)});
          for (auto m : eq->minterms.front().members) dep.push_back({-1, model.state(m, t - 1)});
          dep.push_back({-1, model.state(e, 0)});
          break;
        case Coupling::all_literals:
          dep.push_back({T, model.state(e, t)});
          for (const auto& mt : eq->minterms)
            for (auto m : mt.members) dep.push_back({-1, model.state(m, t - 1)});
          dep.push_back({-T, model.state(e, 0)});
          break;
        case Coupling::per_minterm_aux:
          dep.push_back({T, model.state(e, t)});
          for (std::size_t j = 0; j < eq->minterms.size(); ++j) {
            const auto tag = "_m" + std::to_string(j + 1);
            const auto aux = model.add_var(
                {"m_" + ename + "_" + std::to_string(j + 1) + st, VarRole::aux, e, j + 1, t});
            std::vector<Term> terms{{1, aux}};
            for (auto m : eq->minterms[j].members) terms.push_back({-1, model.state(m, t - 1)});
            terms.push_back({-1, model.state(e, 0)});
            model.constraints.push_back(
                {"aux_" + ename + tag + st, detail::normalize(std::move(terms)), Sense::le, 0});
            dep.push_back({-1, aux});
          }
          dep.push_back({-T, model.state(e, 0)});
          break;
      }
      model.constraints.push_back({"dep_" + ename + st, detail::normalize(std::move(dep)), Sense::le, 0});
    }
  }
  return model;
}

// ---------------------------------------------------------------------------
// LP text

namespace detail {

inline void write_expression(std::ostringstream& out, const MilpModel& model,
                             const std::vector<Term>& terms) {
  constexpr std::size_t kPerLine = 8;
  if (terms.empty()) {
    out << " 0";
    return;
  }
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0 && i % kPerLine == 0) out << "\n  ";
    const auto c = terms[i].coeff;
    const auto mag = c < 0 ? -c : c;
    if (i == 0)
      out << (c < 0 ? " - " : " ");
    else
      out << (c < 0 ? " - " : " + ");
    if (mag != 1) out << mag << ' ';
    out << model.variables[terms[i].var].name;
  }
}

}  // namespace detail

/// Deterministic LP text: Maximize, Subject To, Binary, End.
inline std::string export_lp(const MilpModel& model) {
  std::ostringstream out;
  out << "Maximize\n obj:";
  std::vector<Term> obj;
  for (auto v : model.objective) obj.push_back({1, v});
  detail::write_expression(out, model, obj);
  out << "\nSubject To\n";
  for (const auto& c : model.constraints) {
    out << ' ' << c.name << ':';
    detail::write_expression(out, model, c.terms);
    out << (c.sense == Sense::le ? " <= " : " >= ") << c.rhs << '\n';
  }
  out << "Binary\n";
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    out << (i % 8 == 0 ? " " : " ") << model.variables[i].name;
    if (i % 8 == 7 || i + 1 == model.variables.size()) out << '\n';
  }
  out << "End\n";
  return out.str();
}

/// Result of reading LP text back; only the subset this library writes.
struct LpFile {
  struct Row {
    std::string name;
    std::vector<std::pair<std::int64_t, std::string>> terms;
    Sense sense = Sense::le;
    std::int64_t rhs = 0;
  };
  std::vector<std::pair<std::int64_t, std::string>> objective;
  std::vector<Row> constraints;
  std::vector<std::string> binaries;
};

class LpParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads LP text produced by export_lp. Checks section order, name rules
/// (at most 255 characters, no leading digit) and that every referenced
/// variable is declared binary.
inline LpFile parse_lp(std::string_view text) {
  enum class Section { none, objective, constraints, binary, end };
  LpFile lp;
  Section section = Section::none;
  std::string pending;  // statement text accumulated across continuation lines

  auto valid_name = [](const std::string& s) {
    if (s.empty() || s.size() > 255 || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    });
  };

  auto parse_terms = [&](const std::string& expr) {
    std::vector<std::pair<std::int64_t, std::string>> terms;
    std::istringstream in(expr);
    std::string tok;
    std::int64_t sign = 1;
    std::optional<std::int64_t> coeff;
    while (in >> tok) {
      if (tok == "+") { sign = 1; continue; }
      if (tok == "-") { sign = -1; continue; }
      if (std::isdigit(static_cast<unsigned char>(tok[0]))) {
        coeff = std::stoll(tok);
        continue;
      }
      if (!valid_name(tok)) throw LpParseError("invalid variable name '" + tok + "'");
      terms.emplace_back(sign * coeff.value_or(1), tok);
      sign = 1;
      coeff.reset();
    }
    if (coeff && !(terms.empty() && *coeff == 0)) throw LpParseError("dangling coefficient in '" + expr + "'");
    return terms;
  };

  auto flush = [&]() {
    if (pending.empty()) return;
    const auto colon = pending.find(':');
    if (colon == std::string::npos) throw LpParseError("missing row label in '" + pending + "'");
    std::string label = pending.substr(0, colon);
    label.erase(0, label.find_first_not_of(' '));
    label.erase(label.find_last_not_of(' ') + 1);
    std::string body = pending.substr(colon + 1);
    if (section == Section::objective) {
      lp.objective = parse_terms(body);
    } else {
      const auto le = body.find("<=");
      const auto ge = body.find(">=");
      if ((le == std::string::npos) == (ge == std::string::npos))
        throw LpParseError("row " + label + " needs exactly one of <= or >=");
      const auto at = le != std::string::npos ? le : ge;
      LpFile::Row row;
      row.name = label;
      row.terms = parse_terms(body.substr(0, at));
      row.sense = le != std::string::npos ? Sense::le : Sense::ge;
      row.rhs = std::stoll(body.substr(at + 2));
      lp.constraints.push_back(std::move(row));
    }
    pending.clear();
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '\\') continue;
    const bool continuation = line[0] == ' ' && line.size() > 1 && line[1] == ' ';

    if (line[0] != ' ') {
      flush();
      if (line == "Maximize") {
        if (section != Section::none) throw LpParseError("Maximize must come first");
        section = Section::objective;
      } else if (line == "Subject To") {
        if (section != Section::objective) throw LpParseError("Subject To out of order");
        section = Section::constraints;
      } else if (line == "Binary") {
        if (section != Section::constraints) throw LpParseError("Binary out of order");
        section = Section::binary;
      } else if (line == "End") {
        section = Section::end;
      } else {
        throw LpParseError("unknown section '" + line + "'");
      }
      continue;
    }
    switch (section) {
      case Section::objective:
      case Section::constraints:
        if (!continuation) flush();
        pending += line;
        break;
      case Section::binary: {
        std::istringstream in(line);
        std::string name;
        while (in >> name) {
          if (!valid_name(name)) throw LpParseError("invalid binary name '" + name + "'");
          lp.binaries.push_back(name);
        }
        break;
      }
      default:
        throw LpParseError("text outside any section");
    }
  }
  flush();
  if (section != Section::end) throw LpParseError("missing End");

  std::unordered_map<std::string, int> declared;
  for (const auto& b : lp.binaries)
    if (!declared.emplace(b, 0).second) throw LpParseError("binary declared twice: " + b);
  auto check = [&](const std::vector<std::pair<std::int64_t, std::string>>& terms) {
    for (const auto& [c, v] : terms)
      if (!declared.count(v)) throw LpParseError("undeclared variable " + v);
  };
  check(lp.objective);
  for (const auto& row : lp.constraints) check(row.terms);
  return lp;
}

// ---------------------------------------------------------------------------
// Assignments

using Assignment = std::vector<std::uint8_t>;

/// Name of the first violated constraint, if any.
inline std::optional<std::string> first_violation(const MilpModel& model, const Assignment& a) {
  if (a.size() != model.variables.size()) throw std::invalid_argument("assignment size mismatch");
  for (const auto& c : model.constraints) {
    std::int64_t lhs = 0;
    for (const auto& t : c.terms) lhs += t.coeff * a[t.var];
    const bool ok = c.sense == Sense::le ? lhs <= c.rhs : lhs >= c.rhs;
    if (!ok) return c.name;
  }
  return std::nullopt;
}

inline std::size_t objective_value(const MilpModel& model, const Assignment& a) {
  std::size_t v = 0;
  for (auto i : model.objective) v += a.at(i);
  return v;
}

/// The assignment a cascade from `seeds` induces: states follow the
/// synchronous trace (held at the fixed point), aux variables mark broken
/// minterms.
inline Assignment assignment_from_cascade(const DependencySystem& system, const MilpModel& model,
                                          const EntitySet& seeds) {
  const auto trace = simulate(system, seeds);
  auto dead_at = [&](std::size_t t) -> const EntitySet& {
    return trace.steps[std::min(t, trace.steps.size() - 1)];
  };
  Assignment a(model.variables.size(), 0);
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    const auto& var = model.variables[v];
    if (var.role == VarRole::state) {
      a[v] = dead_at(var.step).test(var.entity) ? 1 : 0;
    } else {
      const auto& mt = system.equation_for(var.entity)->minterms[var.minterm - 1];
      const auto& prev = dead_at(var.step - 1);
      a[v] = std::any_of(mt.members.begin(), mt.members.end(),
                         [&](EntityIndex m) { return prev.test(m); })
                 ? 1
                 : 0;
    }
  }
  return a;
}

/// Pointwise-greatest feasible completion of a step-0 attack, found from
/// the constraint rows alone: variables are fixed in (step, aux before
/// state) order, each set to 1 unless a fully decided row forbids it.
/// Every row either caps its latest variable by a nonnegative combination
/// of earlier ones or bounds it from below, so this completion dominates
/// every feasible one. Returns nullopt when the attack has no completion.
inline std::optional<Assignment> greatest_completion(const MilpModel& model,
                                                     const std::vector<std::uint8_t>& attacked) {
  const auto nv = model.variables.size();
  std::vector<std::vector<std::size_t>> rows_of(nv);
  for (std::size_t r = 0; r < model.constraints.size(); ++r)
    for (const auto& t : model.constraints[r].terms) rows_of[t.var].push_back(r);

  std::vector<std::size_t> order(nv);
  for (std::size_t i = 0; i < nv; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = model.variables[x];
    const auto& b = model.variables[y];
    if (a.step != b.step) return a.step < b.step;
    return a.role == VarRole::aux && b.role == VarRole::state;
  });

  Assignment value(nv, 0);
  std::vector<std::uint8_t> decided(nv, 0);
  auto row_ok = [&](const Constraint& c) {
    std::int64_t lhs = 0;
    for (const auto& t : c.terms) {
      if (!decided[t.var]) return true;
      lhs += t.coeff * value[t.var];
    }
    return c.sense == Sense::le ? lhs <= c.rhs : lhs >= c.rhs;
  };
  auto all_rows_ok = [&](std::size_t v) {
    return std::all_of(rows_of[v].begin(), rows_of[v].end(),
                       [&](std::size_t r) { return row_ok(model.constraints[r]); });
  };

  for (auto v : order) {
    const auto& var = model.variables[v];
    decided[v] = 1;
    if (var.role == VarRole::state && var.step == 0) {
      value[v] = attacked.at(var.entity);
      if (!all_rows_ok(v)) return std::nullopt;
      continue;
    }
    value[v] = 1;
    if (all_rows_ok(v)) continue;
    value[v] = 0;
    if (!all_rows_ok(v)) return std::nullopt;
  }
  return value;
}

struct EnumeratedOptimum {
  std::size_t objective = 0;
  EntitySet attack;
};

/// Model optimum by enumerating every step-0 attack within the budget and
/// completing each with greatest_completion. Exponential; test-sized models.
inline EnumeratedOptimum optimum_by_enumeration(const MilpModel& model) {
  const auto n = model.entity_count;
  const auto k = std::min(model.budget, n);
  EnumeratedOptimum best{0, EntitySet(n)};
  bool found = false;
  for (std::size_t size = 0; size <= k; ++size) {
    vuln::detail::for_each_combination(0, n, size, [&](const std::vector<EntityIndex>& combo) {
      std::vector<std::uint8_t> attacked(n, 0);
      for (auto i : combo) attacked[i] = 1;
      auto completion = greatest_completion(model, attacked);
      if (!completion) return;
      const auto obj = objective_value(model, *completion);
      if (!found || obj > best.objective) {
        best.objective = obj;
        best.attack = vuln::detail::to_set(n, combo);
        found = true;
      }
    });
  }
  return best;
}

/// Maps a complete 0/1 assignment (by variable name) back to an attack and
/// re-simulates it. Throws when the assignment is incomplete, infeasible,
/// or claims deaths the cascade does not produce.
inline vuln::AttackResult map_assignment(const DependencySystem& system, const MilpModel& model,
                                         const std::map<std::string, int>& by_name) {
  if (model.entity_count != system.size())
    throw std::invalid_argument("model was built for a different system");
  Assignment a(model.variables.size(), 0);
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    auto it = by_name.find(model.variables[v].name);
    if (it == by_name.end())
      throw std::invalid_argument("assignment missing variable " + model.variables[v].name);
    if (it->second != 0 && it->second != 1)
      throw std::invalid_argument("non-binary value for " + model.variables[v].name);
    a[v] = static_cast<std::uint8_t>(it->second);
  }
  if (auto bad = first_violation(model, a))
    throw std::invalid_argument("infeasible assignment: constraint " + *bad + " violated");

  EntitySet initial(system.size());
  EntitySet claimed(system.size());
  for (EntityIndex e = 0; e < system.size(); ++e) {
    if (a[model.state(e, 0)]) initial.set(e);
    if (a[model.state(e, model.horizon - 1)]) claimed.set(e);
  }
  auto result = vuln::make_result(system, std::move(initial), vuln::Method::milp);
  if (!claimed.is_subset_of(result.final_dead))
    throw std::invalid_argument("assignment claims deaths the cascade does not produce");
  return result;
}

}  // namespace iim::milp
