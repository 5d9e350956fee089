#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "iim/iim.hpp"

namespace iim::cli {
namespace {

using vuln::Method;

class ArgumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Case I solver requested for a system of another class.
class MismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::map<std::string, std::string> kMethodNames{
    {"auto", "auto"}, {"case1", "case1"}, {"exact", "bnb"},
    {"bnb", "bnb"},   {"greedy", "greedy"}, {"brute", "brute"}};

Method resolve_method(const std::string& name, const DependencySystem& system) {
  const auto& canonical = kMethodNames.at(name);
  Method m = Method::bnb;
  if (canonical == "auto") m = vuln::auto_method(system);
  else if (canonical == "case1") m = Method::case1;
  else if (canonical == "greedy") m = Method::greedy;
  else if (canonical == "brute") m = Method::brute;
  if (m == Method::case1) {
    const auto c = classify(system);
    if (c != CaseClass::CaseI)
      throw MismatchError("Case I solver requires Case I; file classifies " + std::string(to_string(c)));
  }
  return m;
}

std::string case_label(CaseClass c) {
  switch (c) {
    case CaseClass::CaseI: return "I";
    case CaseClass::CaseII: return "II";
    case CaseClass::CaseIII: return "III";
    case CaseClass::CaseIV: break;
  }
  return "IV";
}

std::string joined(const DependencySystem& system, const EntitySet& set) {
  auto s = vuln::join_names(system, set, ' ');
  return s.empty() ? "(none)" : s;
}

nlohmann::json name_array(const DependencySystem& system, const EntitySet& set) {
  return nlohmann::json(system.names(set));
}

void write_text(const std::string& path, const std::string& text) {
  try {
    write_file(path, text);
  } catch (const std::runtime_error& e) {
    throw std::ios_base::failure(e.what());
  }
}

// --- subcommands -----------------------------------------------------------

int cmd_validate(const std::string& file, bool strict, std::ostream& out) {
  const auto system = parse_file(file);
  const auto report = validate(system, strict);
  for (const auto& w : report.warnings) out << "warning: " << w.entity << ": " << w.reason << '\n';
  for (const auto& v : report.violations) out << "violation: " << v.entity << ": " << v.reason << '\n';
  out << (report.ok() ? "valid" : "invalid") << " (" << report.violations.size() << " violations, "
      << report.warnings.size() << " warnings)\n";
  return report.ok() ? kOk : kParseOrIo;
}

int cmd_classify(const std::string& file, std::ostream& out) {
  const auto system = parse_file(file);
  out << to_string(classify(system)) << '\n';
  return kOk;
}

int cmd_cascade(const std::string& file, const std::vector<std::string>& fail, bool show_trace,
                const std::string& out_path, std::ostream& out) {
  const auto system = parse_file(file);
  EntitySet initial(system.size());
  for (const auto& name : fail) {
    auto idx = system.find(name);
    if (!idx) throw ArgumentError("entity not in universe: " + name);
    initial.set(*idx);
  }
  const auto trace = simulate(system, initial);
  if (show_trace) {
    std::size_t width = 6;
    for (const auto& e : system.entities()) width = std::max(width, e.name.size());
    out << std::left << std::setw(static_cast<int>(width)) << "entity";
    for (std::size_t t = 0; t < trace.steps.size(); ++t) out << "  t" << t;
    out << '\n';
    for (EntityIndex i = 0; i < system.size(); ++i) {
      out << std::left << std::setw(static_cast<int>(width)) << system.name(i);
      for (std::size_t t = 0; t < trace.steps.size(); ++t) {
        const auto label = "t" + std::to_string(t);
        out << std::right << std::setw(static_cast<int>(label.size()) + 2) << (trace.steps[t].test(i) ? 1 : 0);
      }
      out << '\n';
    }
  }
  out << "fixed point at step " << trace.fixed_point_step << ": " << trace.final_dead().count() << " of "
      << system.size() << " dead\n";
  out << "dead: " << joined(system, trace.final_dead()) << '\n';
  if (!out_path.empty()) write_text(out_path, trace_csv(system, trace));
  return kOk;
}

int cmd_kmvn(const std::string& file, std::size_t k, const std::string& method_name,
             const std::string& out_path, std::ostream& out) {
  const auto system = parse_file(file);
  const auto c = classify(system);
  const auto method = resolve_method(method_name, system);
  const auto r = vuln::solve(system, k, method);
  out << "method: " << vuln::to_string(method) << '\n'
      << "case: " << to_string(c) << '\n'
      << "budget: " << k << '\n'
      << "initial_set: " << joined(system, r.initial_set) << '\n'
      << "kill_count: " << r.kill_count << " of " << system.size() << '\n'
      << "final_dead: " << joined(system, r.final_dead) << '\n';
  if (!out_path.empty()) {
    nlohmann::json j;
    j["schema"] = 1;
    j["command"] = "kmvn";
    j["case"] = case_label(c);
    j["method"] = std::string(vuln::to_string(method));
    j["k"] = k;
    j["universe"] = system.size();
    j["initial_set"] = name_array(system, r.initial_set);
    j["final_dead"] = name_array(system, r.final_dead);
    j["kill_count"] = r.kill_count;
    write_text(out_path, j.dump(2) + "\n");
  }
  return kOk;
}

int cmd_sweep(const std::string& file, std::size_t k_max, const std::string& method_name,
              const std::string& out_path, std::ostream& out) {
  const auto system = parse_file(file);
  const auto method = resolve_method(method_name, system);
  if (k_max > system.size())
    throw ArgumentError("--kmax " + std::to_string(k_max) + " exceeds universe size " +
                        std::to_string(system.size()));
  const auto points = vuln::sweep(system, k_max, method);
  out << "method: " << vuln::to_string(method) << '\n' << "k  kill_count  initial_set\n";
  for (const auto& p : points)
    out << p.k << "  " << p.kill_count << "  " << joined(system, p.initial_set) << '\n';
  write_text(out_path, vuln::sweep_csv(system, points));
  return kOk;
}

int cmd_export_lp(const std::string& file, std::size_t k, const std::string& out_path, std::ostream& out) {
  const auto system = parse_file(file);
  const auto model = milp::build_model(system, k);
  write_text(out_path, milp::export_lp(model));
  out << "wrote " << out_path << ": " << model.state_count() << " state variables, " << model.aux_count()
      << " auxiliary variables, " << model.constraints.size() << " constraints, horizon " << model.horizon
      << '\n';
  return kOk;
}

int cmd_gen_rules(const std::string& power, const std::string& lines, const std::string& towers,
                  const std::string& buildings, const std::string& links, const std::string& out_path,
                  std::ostream& out, std::ostream& err) {
  const auto geo = ingest::load_geo(power, lines, towers, buildings, links);
  const auto rules = ingest::generate_rules(geo);
  for (const auto& w : rules.warnings) err << "warning: " << w << '\n';
  write_text(out_path, serialize_text(rules.system));
  out << "wrote " << out_path << ": " << rules.system.size() << " entities, " << rules.system.equations().size()
      << " equations, " << to_string(classify(rules.system)) << '\n';
  return kOk;
}

int cmd_gen_random(std::uint64_t seed, const std::string& case_name, std::size_t n, std::size_t m,
                   std::size_t max_minterms, std::size_t max_size, const std::string& out_path,
                   std::ostream& out) {
  static const std::map<std::string, CaseClass> kCases{
      {"I", CaseClass::CaseI}, {"II", CaseClass::CaseII}, {"III", CaseClass::CaseIII}, {"IV", CaseClass::CaseIV}};
  ingest::RandomSystemSpec spec;
  spec.seed = seed;
  spec.case_class = kCases.at(case_name);
  spec.n = n;
  spec.m = m;
  spec.max_minterms = max_minterms;
  spec.max_size = max_size;
  DependencySystem system;
  try {
    system = ingest::random_system(spec);
  } catch (const std::invalid_argument& e) {
    throw ArgumentError(e.what());
  }
  write_text(out_path, serialize_text(system));
  out << "wrote " << out_path << ": " << system.size() << " entities, " << system.equations().size()
      << " equations, " << to_string(classify(system)) << '\n';
  return kOk;
}

int cmd_gen_region(std::uint64_t seed, const ingest::RegionSpec& spec, const std::string& dir, std::ostream& out) {
  const auto net = ingest::synthetic_region(seed, spec);
  const auto csv = ingest::to_csv(net);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::ios_base::failure("cannot create " + dir + ": " + ec.message());
  const std::filesystem::path base(dir);
  write_text((base / "power.csv").string(), csv.power);
  write_text((base / "lines.csv").string(), csv.lines);
  write_text((base / "towers.csv").string(), csv.towers);
  write_text((base / "buildings.csv").string(), csv.buildings);
  write_text((base / "links.csv").string(), csv.links);
  out << "wrote region to " << dir << ": " << net.generators.size() << " generators, " << net.loads.size()
      << " loads, " << net.towers.size() << " towers, " << net.buildings.size() << " buildings, "
      << net.transmission_lines.size() << " lines, " << net.fiber_links.size() << " links\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Implicative interdependency model: cascades and K most vulnerable nodes", "iim"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::function<int()> action;
  std::vector<std::string> methods;
  for (const auto& [k, v] : kMethodNames) methods.push_back(k);

  std::string file, out_path;
  bool strict = false, show_trace = false;
  std::vector<std::string> fail;
  std::size_t k = 0, k_max = 0;
  std::string method = "auto";

  auto* validate_cmd = app.add_subcommand("validate", "Check structural invariants of a rule file");
  validate_cmd->add_option("file", file, "Rule file (.iim)")->required();
  validate_cmd->add_flag("--strict", strict, "Treat same-layer dependencies as violations");
  validate_cmd->callback([&] { action = [&] { return cmd_validate(file, strict, out); }; });

  auto* classify_cmd = app.add_subcommand("classify", "Report the dependency case class");
  classify_cmd->add_option("file", file, "Rule file (.iim)")->required();
  classify_cmd->callback([&] { action = [&] { return cmd_classify(file, out); }; });

  auto* cascade_cmd = app.add_subcommand("cascade", "Simulate a cascade from an initial attack");
  cascade_cmd->add_option("file", file, "Rule file (.iim)")->required();
  cascade_cmd->add_option("--fail", fail, "Comma-separated entities attacked at t0")->delimiter(',');
  cascade_cmd->add_flag("--trace", show_trace, "Print the per-step dead grid");
  cascade_cmd->add_option("--out", out_path, "Write the trace grid as CSV");
  cascade_cmd->callback([&] { action = [&] { return cmd_cascade(file, fail, show_trace, out_path, out); }; });

  auto* kmvn_cmd = app.add_subcommand("kmvn", "Find the K most vulnerable entities");
  kmvn_cmd->add_option("file", file, "Rule file (.iim)")->required();
  kmvn_cmd->add_option("-k", k, "Attack budget")->required()->check(CLI::NonNegativeNumber);
  kmvn_cmd->add_option("--method", method, "Solver")->check(CLI::IsMember(methods))->capture_default_str();
  kmvn_cmd->add_option("--out", out_path, "Write the result as JSON");
  kmvn_cmd->callback([&] { action = [&] { return cmd_kmvn(file, k, method, out_path, out); }; });

  auto* sweep_cmd = app.add_subcommand("sweep", "Kill counts for every budget 0..kmax");
  sweep_cmd->add_option("file", file, "Rule file (.iim)")->required();
  sweep_cmd->add_option("--kmax", k_max, "Largest budget")->required()->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--method", method, "Solver")->check(CLI::IsMember(methods))->capture_default_str();
  sweep_cmd->add_option("--out", out_path, "CSV output: k,kill_count,initial_set")->required();
  sweep_cmd->callback([&] { action = [&] { return cmd_sweep(file, k_max, method, out_path, out); }; });

  auto* lp_cmd = app.add_subcommand("export-lp", "Write the integer program in LP format");
  lp_cmd->add_option("file", file, "Rule file (.iim)")->required();
  lp_cmd->add_option("-k", k, "Attack budget")->required()->check(CLI::NonNegativeNumber);
  lp_cmd->add_option("-o", out_path, "LP output path")->required();
  lp_cmd->callback([&] { action = [&] { return cmd_export_lp(file, k, out_path, out); }; });

  std::string power, lines, towers, buildings, links;
  auto* rules_cmd = app.add_subcommand("gen-rules", "Synthesize live equations from infrastructure CSVs");
  rules_cmd->add_option("--power", power, "Generators and loads: id,lat,lon[,kind]")->required();
  rules_cmd->add_option("--lines", lines, "Transmission lines: id,from_id,to_id")->required();
  rules_cmd->add_option("--towers", towers, "Cell towers: id,lat,lon")->required();
  rules_cmd->add_option("--buildings", buildings, "Fiber-lit buildings: id,lat,lon")->required();
  rules_cmd->add_option("--links", links, "Fiber links: id,from_id,to_id")->required();
  rules_cmd->add_option("-o", out_path, "Rule file output path")->required();
  rules_cmd->callback([&] {
    action = [&] { return cmd_gen_rules(power, lines, towers, buildings, links, out_path, out, err); };
  });

  std::uint64_t seed = 1;
  std::string case_name;
  std::size_t n = 0, m = 0, max_minterms = 3, max_size = 3;
  auto* random_cmd = app.add_subcommand("gen-random", "Generate a seeded random rule file");
  random_cmd->add_option("--seed", seed, "RNG seed")->required();
  random_cmd->add_option("--case", case_name, "Case class")->required()->check(CLI::IsMember({"I", "II", "III", "IV"}));
  random_cmd->add_option("-n", n, "Layer A entities")->required()->check(CLI::PositiveNumber);
  random_cmd->add_option("-m", m, "Layer B entities")->required()->check(CLI::PositiveNumber);
  random_cmd->add_option("--max-minterms", max_minterms, "Most minterms per equation")->capture_default_str();
  random_cmd->add_option("--max-size", max_size, "Most members per minterm")->capture_default_str();
  random_cmd->add_option("-o", out_path, "Rule file output path")->required();
  random_cmd->callback([&] {
    action = [&] { return cmd_gen_random(seed, case_name, n, m, max_minterms, max_size, out_path, out); };
  });

  ingest::RegionSpec region;
  auto* region_cmd = app.add_subcommand("gen-region", "Write a synthetic infrastructure region as CSVs");
  region_cmd->add_option("--seed", seed, "RNG seed")->required();
  region_cmd->add_option("--generators", region.generators)->capture_default_str();
  region_cmd->add_option("--loads", region.loads)->capture_default_str();
  region_cmd->add_option("--towers", region.towers)->capture_default_str();
  region_cmd->add_option("--buildings", region.buildings)->capture_default_str();
  region_cmd->add_option("--extra-lines", region.extra_lines)->capture_default_str();
  region_cmd->add_option("--extra-links", region.extra_links)->capture_default_str();
  region_cmd->add_option("-o", out_path, "Output directory")->required();
  region_cmd->callback([&] { action = [&] { return cmd_gen_region(seed, region, out_path, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidArguments;
  }

  try {
    return action();
  } catch (const MismatchError& e) {
    err << "error: " << e.what() << '\n';
    return kCaseMismatch;
  } catch (const vuln::CaseMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kCaseMismatch;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidArguments;
  } catch (const ParseError& e) {
    err << "error: " << file << ": " << e.what() << '\n';
    return kParseOrIo;
  } catch (const ingest::IngestError& e) {
    err << "error: " << e.what() << '\n';
    return kParseOrIo;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kParseOrIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidArguments;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kParseOrIo;
  }
}

}  // namespace iim::cli
