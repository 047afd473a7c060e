#pragma once

#include "modshift/contfrac.hpp"
#include "modshift/cosets.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace modshift {

struct VertexState {
  CosetLabel coset = 0;
  int sign = 1;

  friend bool operator==(const VertexState&, const VertexState&) = default;
};

// Finite vertex graph of the coset-decorated shift. A letter (k, e) leaves
// the vertex (e, -sign k) and enters (tau_k(e), sign k); letters are grouped
// into edge families by (source vertex, k mod N), since tau_k only sees k mod N.
class TransitionGraph {
 public:
  struct EdgeFamily {
    std::size_t from = 0;
    std::size_t to = 0;
    std::int64_t residue = 0;  // k mod N
    std::int64_t digit = 0;    // smallest |k| in the class with the family's sign
    bool active = true;
  };

  explicit TransitionGraph(const CosetTable& table);

  const CosetTable& table() const { return *table_; }
  std::size_t vertex_count() const { return 2 * table_->size(); }
  std::size_t vertex_index(const VertexState& v) const { return 2 * v.coset + (v.sign > 0 ? 0 : 1); }
  VertexState vertex(std::size_t index) const { return {index / 2, index % 2 == 0 ? 1 : -1}; }

  const std::vector<EdgeFamily>& families() const { return families_; }
  const std::vector<std::size_t>& out_families(std::size_t v) const { return out_[v]; }
  std::size_t active_family_count() const;

  // Negative controls: drop a family from the incidence structure.
  void remove_family(std::size_t id) { families_.at(id).active = false; }

  // Vertex a letter starts from / ends at.
  std::size_t initial_vertex(const SymbolEntry& letter) const;
  std::size_t terminal_vertex(const SymbolEntry& letter) const;

 private:
  const CosetTable* table_;
  std::vector<EdgeFamily> families_;
  std::vector<std::vector<std::size_t>> out_;
};

inline TransitionGraph build_graph(const CosetTable& table) { return TransitionGraph(table); }

// Admissible word connecting two vertices: i(word_1) = from, t(word_n) = to;
// the empty word when from == to.
struct Witness {
  std::size_t from = 0;
  std::size_t to = 0;
  SymbolSequence word;
};

struct IrreducibilityReport {
  bool irreducible = false;
  std::size_t component_count = 0;  // strongly connected components
  std::size_t diameter = 0;         // longest shortest path; only set when irreducible
  std::vector<Witness> witnesses;   // one per ordered vertex pair when requested
};

IrreducibilityReport check_finitely_irreducible(const TransitionGraph& graph, bool emit_witnesses = true);

// Alternating digits and e_{k+1} = tau_{x_k}(e_k) at every index.
bool is_admissible(const SymbolSequence& seq, const CosetTable& table);

// Replays a witness against the graph's coset action.
bool verify_witness(const TransitionGraph& graph, const Witness& w);

nlohmann::json witnesses_to_json(const TransitionGraph& graph, const std::vector<Witness>& witnesses);

}  // namespace modshift
