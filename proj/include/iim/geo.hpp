#pragma once

// Geospatial infrastructure data and live-equation synthesis.
//
// Power side (layer A): generators, loads, transmission lines.
// Communication side (layer B): cell towers, fiber-lit buildings, fiber links.
//
//   generator  <- nearest_tower + nearest_building * link
//   tower      <- gen1 * line1 + gen2 * line2      (two nearest generators)
//   building   <- gen1 * line1 + gen2 * line2
//
// Loads, lines and links carry no equation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "iim/model.hpp"

namespace iim::ingest {

struct GeoNode {
  std::string id;
  double lat = 0.0;
  double lon = 0.0;
};

struct GeoLink {
  std::string id;
  std::string from;
  std::string to;
};

struct GeoNetwork {
  std::vector<GeoNode> generators;
  std::vector<GeoNode> loads;
  std::vector<GeoNode> towers;
  std::vector<GeoNode> buildings;
  std::vector<GeoLink> transmission_lines;
  std::vector<GeoLink> fiber_links;
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kEarthRadiusMeters = 6371008.8;

/// Great-circle distance in meters between two WGS-84 degree coordinates.
inline double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kRad = 3.14159265358979323846 / 180.0;
  const double dlat = (lat2 - lat1) * kRad;
  const double dlon = (lon2 - lon1) * kRad;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * kRad) * std::cos(lat2 * kRad) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(a)));
}

inline double distance_m(const GeoNode& a, const GeoNode& b) {
  return haversine_m(a.lat, a.lon, b.lat, b.lon);
}

// ---------------------------------------------------------------------------
// CSV loading

namespace detail {

struct CsvTable {
  std::string file;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_of_row;  // 1-based file line, header is line 1

  std::size_t column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw IngestError(file + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
  std::optional<std::size_t> optional_column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  }
};

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline CsvTable read_csv(std::istream& in, const std::string& file) {
  CsvTable t;
  t.file = file;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto cells = split_csv(line);
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size())
      throw IngestError(file + ": expected " + std::to_string(t.header.size()) + " fields, row " +
                        std::to_string(line_no));
    t.rows.push_back(std::move(cells));
    t.line_of_row.push_back(line_no);
  }
  if (!have_header) throw IngestError(file + ": missing header");
  return t;
}

inline CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path);
  return read_csv(in, std::filesystem::path(path).filename().string());
}

inline double parse_degrees(const std::string& s, const CsvTable& t, std::size_t row) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw IngestError(t.file + ": bad coordinate '" + s + "', row " + std::to_string(t.line_of_row[row]));
}

}  // namespace detail

/// In-memory CSV sources, one string per file.
struct GeoSources {
  std::string power;
  std::string lines;
  std::string towers;
  std::string buildings;
  std::string links;
};

namespace detail {

inline GeoNetwork load_tables(const CsvTable& power, const CsvTable& lines, const CsvTable& towers,
                              const CsvTable& buildings, const CsvTable& links) {
  GeoNetwork net;
  std::unordered_map<std::string, char> owner;  // id -> 'p'ower node, 'l'ine, 't'ower, 'b'uilding, 'f'iber

  auto claim = [&](const std::string& id, char kind, const CsvTable& t, std::size_t row) {
    if (!is_identifier(id))
      throw IngestError(t.file + ": invalid id '" + id + "', row " + std::to_string(t.line_of_row[row]));
    if (!owner.emplace(id, kind).second)
      throw IngestError(t.file + ": duplicate id " + id + ", row " + std::to_string(t.line_of_row[row]));
  };

  auto read_nodes = [&](const CsvTable& t, char kind, auto&& sink) {
    const auto ci = t.column("id");
    const auto clat = t.column("lat");
    const auto clon = t.column("lon");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      claim(row[ci], kind, t, r);
      sink(GeoNode{row[ci], parse_degrees(row[clat], t, r), parse_degrees(row[clon], t, r)}, r);
    }
  };

  {
    const auto ckind = power.optional_column("kind");
    read_nodes(power, 'p', [&](GeoNode node, std::size_t r) {
      const std::string kind = ckind ? power.rows[r][*ckind] : "generator";
      if (kind == "generator" || kind.empty())
        net.generators.push_back(std::move(node));
      else if (kind == "load")
        net.loads.push_back(std::move(node));
      else
        throw IngestError(power.file + ": unknown kind '" + kind + "', row " +
                          std::to_string(power.line_of_row[r]));
    });
  }
  read_nodes(towers, 't', [&](GeoNode node, std::size_t) { net.towers.push_back(std::move(node)); });
  read_nodes(buildings, 'b', [&](GeoNode node, std::size_t) { net.buildings.push_back(std::move(node)); });

  auto read_links = [&](const CsvTable& t, char kind, char endpoint_kind, std::vector<GeoLink>& out) {
    const auto ci = t.column("id");
    const auto cf = t.column("from_id");
    const auto ct = t.column("to_id");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const auto& row = t.rows[r];
      claim(row[ci], kind, t, r);
      for (auto c : {cf, ct}) {
        auto it = owner.find(row[c]);
        if (it == owner.end() || it->second != endpoint_kind)
          throw IngestError(t.file + ": dangling endpoint " + row[c] + ", row " +
                            std::to_string(t.line_of_row[r]));
      }
      out.push_back(GeoLink{row[ci], row[cf], row[ct]});
    }
  };
  read_links(lines, 'l', 'p', net.transmission_lines);
  read_links(links, 'f', 'b', net.fiber_links);
  return net;
}

}  // namespace detail

/// Loads the five CSV files. Throws IngestError naming the file and row
/// for a missing column, dangling endpoint, duplicate id or bad value.
inline GeoNetwork load_geo(const std::string& power_csv, const std::string& lines_csv,
                           const std::string& towers_csv, const std::string& buildings_csv,
                           const std::string& links_csv) {
  return detail::load_tables(detail::read_csv_file(power_csv), detail::read_csv_file(lines_csv),
                             detail::read_csv_file(towers_csv), detail::read_csv_file(buildings_csv),
                             detail::read_csv_file(links_csv));
}

inline GeoNetwork load_geo(const GeoSources& src) {
  auto table = [](const std::string& text, const char* name) {
    std::istringstream in(text);
    return detail::read_csv(in, name);
  };
  return detail::load_tables(table(src.power, "power.csv"), table(src.lines, "lines.csv"),
                             table(src.towers, "towers.csv"), table(src.buildings, "buildings.csv"),
                             table(src.links, "links.csv"));
}

// ---------------------------------------------------------------------------
// Rule generation

struct RuleSet {
  DependencySystem system;
  std::vector<std::string> warnings;
};

/// Nodes ordered by distance from `from`; equal distances by id.
inline std::vector<const GeoNode*> nearest(const std::vector<GeoNode>& nodes, const GeoNode& from,
                                           std::size_t count) {
  std::vector<std::pair<double, const GeoNode*>> d;
  d.reserve(nodes.size());
  for (const auto& n : nodes) d.emplace_back(distance_m(from, n), &n);
  std::sort(d.begin(), d.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return x.second->id < y.second->id;
  });
  std::vector<const GeoNode*> out;
  for (std::size_t i = 0; i < std::min(count, d.size()); ++i) out.push_back(d[i].second);
  return out;
}

/// Among links touching `endpoint`, the one whose other end lies nearest
/// to `target` (ties by link id), or nullptr.
inline const GeoLink* nearest_incident(const std::vector<GeoLink>& links, const std::string& endpoint,
                                       const GeoNode& target,
                                       const std::unordered_map<std::string, const GeoNode*>& nodes) {
  const GeoLink* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& l : links) {
    if (l.from != endpoint && l.to != endpoint) continue;
    const auto& far_id = l.from == endpoint ? l.to : l.from;
    const double d = distance_m(*nodes.at(far_id), target);
    if (best == nullptr || d < best_d || (d == best_d && l.id < best->id)) {
      best = &l;
      best_d = d;
    }
  }
  return best;
}

inline RuleSet generate_rules(const GeoNetwork& geo) {
  if (geo.towers.empty() && geo.buildings.empty())
    throw IngestError("network needs at least one cell tower or fiber-lit building");
  if (geo.generators.empty()) throw IngestError("network needs at least one generator");

  RuleSet out;
  SystemBuilder b;
  for (const auto& g : geo.generators) b.add_entity(g.id, Layer::A, EntityKind::generator);
  for (const auto& l : geo.loads) b.add_entity(l.id, Layer::A, EntityKind::load);
  for (const auto& l : geo.transmission_lines) b.add_entity(l.id, Layer::A, EntityKind::transmission_line);
  for (const auto& t : geo.towers) b.add_entity(t.id, Layer::B, EntityKind::cell_tower);
  for (const auto& f : geo.buildings) b.add_entity(f.id, Layer::B, EntityKind::fiber_building);
  for (const auto& l : geo.fiber_links) b.add_entity(l.id, Layer::B, EntityKind::fiber_link);

  std::unordered_map<std::string, const GeoNode*> power_nodes;
  for (const auto& g : geo.generators) power_nodes.emplace(g.id, &g);
  for (const auto& l : geo.loads) power_nodes.emplace(l.id, &l);
  std::unordered_map<std::string, const GeoNode*> building_nodes;
  for (const auto& f : geo.buildings) building_nodes.emplace(f.id, &f);

  for (const auto& g : geo.generators) {
    std::vector<std::vector<std::string>> minterms;
    if (!geo.towers.empty()) minterms.push_back({nearest(geo.towers, g, 1).front()->id});
    if (!geo.buildings.empty()) {
      const auto* bldg = nearest(geo.buildings, g, 1).front();
      if (const auto* link = nearest_incident(geo.fiber_links, bldg->id, g, building_nodes)) {
        minterms.push_back({bldg->id, link->id});
      } else {
        minterms.push_back({bldg->id});
        out.warnings.push_back("building " + bldg->id + " has no fiber link; " + g.id +
                               " depends on the building alone");
      }
    }
    b.add_equation(g.id, minterms);
  }

  auto comm_rule = [&](const GeoNode& node) {
    const auto gens = nearest(geo.generators, node, 2);
    if (gens.size() < 2)
      out.warnings.push_back(node.id + " has fewer than two generators; single-minterm equation");
    std::vector<std::vector<std::string>> minterms;
    for (const auto* g : gens) {
      if (const auto* line = nearest_incident(geo.transmission_lines, g->id, node, power_nodes)) {
        minterms.push_back({g->id, line->id});
      } else {
        minterms.push_back({g->id});
        out.warnings.push_back("generator " + g->id + " has no transmission line; " + node.id +
                               " depends on the generator alone");
      }
    }
    b.add_equation(node.id, minterms);
  };
  for (const auto& t : geo.towers) comm_rule(t);
  for (const auto& f : geo.buildings) comm_rule(f);

  out.system = b.build();
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic regions

struct RegionSpec {
  std::size_t generators = 6;
  std::size_t loads = 3;
  std::size_t towers = 6;
  std::size_t buildings = 5;
  std::size_t extra_lines = 2;  // beyond the spanning tree over power nodes
  std::size_t extra_links = 2;  // beyond the spanning tree over buildings
  double center_lat = 33.45;
  double center_lon = -112.07;
  double spread_deg = 0.25;
};

/// Random region with node positions scattered around the center. Lines
/// form a nearest-earlier-node tree over generators and loads plus extras;
/// links do the same over buildings. Deterministic for a fixed seed.
inline GeoNetwork synthetic_region(std::uint64_t seed, const RegionSpec& spec = {}) {
  std::mt19937_64 rng(seed);
  auto coord = [&](double center) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
    return center + (2.0 * u - 1.0) * spec.spread_deg;
  };
  auto place = [&](const std::string& prefix, std::size_t count, std::vector<GeoNode>& out) {
    for (std::size_t i = 1; i <= count; ++i)
      out.push_back({prefix + std::to_string(i), coord(spec.center_lat), coord(spec.center_lon)});
  };
  GeoNetwork net;
  place("gen_", spec.generators, net.generators);
  place("load_", spec.loads, net.loads);
  place("tower_", spec.towers, net.towers);
  place("bldg_", spec.buildings, net.buildings);

  auto wire = [&](const std::vector<const GeoNode*>& nodes, const std::string& prefix, std::size_t extra,
                  std::vector<GeoLink>& out) {
    std::set<std::pair<std::string, std::string>> used;
    auto add = [&](const GeoNode* a, const GeoNode* c) {
      auto key = std::minmax(a->id, c->id);
      if (a == c || !used.emplace(key.first, key.second).second) return false;
      out.push_back({prefix + std::to_string(out.size() + 1), a->id, c->id});
      return true;
    };
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < i; ++j)
        if (distance_m(*nodes[i], *nodes[j]) < distance_m(*nodes[i], *nodes[best])) best = j;
      add(nodes[i], nodes[best]);
    }
    const std::size_t max_edges = nodes.size() * (nodes.size() - (nodes.empty() ? 0 : 1)) / 2;
    for (std::size_t e = 0; e < extra && out.size() < max_edges;) {
      if (add(nodes[rng() % nodes.size()], nodes[rng() % nodes.size()])) ++e;
    }
  };
  std::vector<const GeoNode*> power;
  for (const auto& g : net.generators) power.push_back(&g);
  for (const auto& l : net.loads) power.push_back(&l);
  wire(power, "line_", spec.extra_lines, net.transmission_lines);
  std::vector<const GeoNode*> bldgs;
  for (const auto& f : net.buildings) bldgs.push_back(&f);
  wire(bldgs, "link_", spec.extra_links, net.fiber_links);
  return net;
}

struct GeoCsvText {
  std::string power, lines, towers, buildings, links;
};

inline GeoCsvText to_csv(const GeoNetwork& net) {
  GeoCsvText out;
  auto coord = [](double v) {
    std::ostringstream s;
    s.precision(9);
    s << v;
    return s.str();
  };
  out.power = "id,lat,lon,kind\n";
  for (const auto& g : net.generators) out.power += g.id + ',' + coord(g.lat) + ',' + coord(g.lon) + ",generator\n";
  for (const auto& l : net.loads) out.power += l.id + ',' + coord(l.lat) + ',' + coord(l.lon) + ",load\n";
  auto nodes = [&](const std::vector<GeoNode>& v) {
    std::string s = "id,lat,lon\n";
    for (const auto& n : v) s += n.id + ',' + coord(n.lat) + ',' + coord(n.lon) + '\n';
    return s;
  };
  auto edges = [](const std::vector<GeoLink>& v) {
    std::string s = "id,from_id,to_id\n";
    for (const auto& l : v) s += l.id + ',' + l.from + ',' + l.to + '\n';
    return s;
  };
  out.towers = nodes(net.towers);
  out.buildings = nodes(net.buildings);
  out.lines = edges(net.transmission_lines);
  out.links = edges(net.fiber_links);
  return out;
}

}  // namespace iim::ingest
