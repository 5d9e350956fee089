#pragma once

// Instance generators from the classic hardness reductions: vertex cover
// to K-MVN, and clique to subset cover.

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "iim/model.hpp"
#include "iim/vuln.hpp"

namespace iim::ingest {

struct UndirectedGraph {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Graph on vertices v1..vn. Rejects self-loops, duplicate edges and
/// out-of-range endpoints.
inline UndirectedGraph make_graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  UndirectedGraph g;
  for (std::size_t i = 1; i <= n; ++i) g.vertices.push_back("v" + std::to_string(i));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw std::out_of_range("edge endpoint out of range");
    if (a == b) throw std::invalid_argument("self-loop on " + g.vertices[a]);
    if (!seen.insert(std::minmax(a, b)).second)
      throw std::invalid_argument("duplicate edge " + g.vertices[a] + "-" + g.vertices[b]);
    g.edges.emplace_back(a, b);
  }
  return g;
}

inline std::vector<std::vector<std::size_t>> adjacency(const UndirectedGraph& g) {
  std::vector<std::vector<std::size_t>> adj(g.vertices.size());
  for (auto [a, b] : g.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

/// How each vertex's neighbours are combined into its live equation.
enum class VcEncoding {
  conjunctive,  // v <- u1*u2*...: one minterm, any dead neighbour kills v
  disjunctive,  // v <- u1 + u2 + ...: v dies once every neighbour is dead
};

struct VcInstance {
  DependencySystem system;
  std::size_t k = 0;  // attack budget, = R
  std::size_t l = 0;  // kill target, = |V|
};

/// Each edge becomes two opposite arcs; every vertex with in-neighbours
/// gets a live equation over them. All entities sit in layer A, so the
/// result only passes non-strict validation. Isolated vertices become
/// roots.
inline VcInstance vc_reduction(const UndirectedGraph& graph, std::size_t r,
                               VcEncoding encoding = VcEncoding::conjunctive) {
  if (graph.vertices.empty()) throw std::invalid_argument("vc_reduction needs a non-empty graph");
  SystemBuilder b;
  for (const auto& v : graph.vertices) b.add_entity(v, Layer::A);
  const auto adj = adjacency(graph);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    if (adj[i].empty()) continue;
    std::vector<std::vector<std::string>> minterms;
    if (encoding == VcEncoding::conjunctive) {
      minterms.emplace_back();
      for (auto j : adj[i]) minterms.back().push_back(graph.vertices[j]);
    } else {
      for (auto j : adj[i]) minterms.push_back({graph.vertices[j]});
    }
    b.add_equation(graph.vertices[i], minterms);
  }
  return {b.build(), r, graph.vertices.size()};
}

/// Ground set = vertices, one two-element member per edge, p = K and
/// q = K(K-1)/2: a K-clique exists iff some K vertices cover q edges.
inline vuln::SubsetCoverInstance clique_to_subset_cover(const UndirectedGraph& graph, std::size_t k) {
  if (graph.vertices.empty()) throw std::invalid_argument("clique_to_subset_cover needs a non-empty graph");
  if (k < 2) throw std::invalid_argument("clique size must be at least 2");
  vuln::SubsetCoverInstance inst;
  inst.ground = graph.vertices;
  for (auto [a, b] : graph.edges) inst.family.push_back({std::min(a, b), std::max(a, b)});
  inst.p = k;
  inst.q = k * (k - 1) / 2;
  return inst;
}

}  // namespace iim::ingest
