#include "modshift/shiftspace.hpp"

#include "modshift/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <queue>

namespace modshift {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

// Iterative Tarjan; returns the number of strongly connected components.
std::size_t count_components(const TransitionGraph& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<std::size_t> index(n, kUnreached), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0, components = 0;

  struct Frame {
    std::size_t v;
    std::size_t edge;
  };
  std::vector<Frame> call;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnreached) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& out = graph.out_families(f.v);
      if (f.edge < out.size()) {
        const auto& fam = graph.families()[out[f.edge++]];
        if (!fam.active) continue;
        const std::size_t w = fam.to;
        if (index[w] == kUnreached) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::size_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        ++components;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
        } while (w != v);
      }
    }
  }
  return components;
}

}  // namespace

TransitionGraph::TransitionGraph(const CosetTable& table) : table_(&table) {
  const std::int64_t n = table.level();
  out_.resize(vertex_count());
  families_.reserve(vertex_count() * static_cast<std::size_t>(n));
  for (std::size_t v = 0; v < vertex_count(); ++v) {
    const VertexState from = vertex(v);
    const int digit_sign = -from.sign;
    for (std::int64_t r = 0; r < n; ++r) {
      EdgeFamily fam;
      fam.from = v;
      fam.residue = r;
      if (digit_sign > 0) {
        fam.digit = r > 0 ? r : n;
      } else {
        fam.digit = r > 0 ? r - n : -n;
      }
      fam.to = vertex_index({table.tau_residue(r, from.coset), digit_sign});
      out_[v].push_back(families_.size());
      families_.push_back(fam);
    }
    std::sort(out_[v].begin(), out_[v].end(), [&](std::size_t x, std::size_t y) {
      return std::abs(families_[x].digit) < std::abs(families_[y].digit);
    });
  }
}

std::size_t TransitionGraph::active_family_count() const {
  return static_cast<std::size_t>(
      std::count_if(families_.begin(), families_.end(), [](const EdgeFamily& f) { return f.active; }));
}

std::size_t TransitionGraph::initial_vertex(const SymbolEntry& letter) const {
  return vertex_index({letter.coset, -sgn(letter.digit)});
}

std::size_t TransitionGraph::terminal_vertex(const SymbolEntry& letter) const {
  return vertex_index({table_->tau(letter.digit, letter.coset), sgn(letter.digit)});
}

IrreducibilityReport check_finitely_irreducible(const TransitionGraph& graph, bool emit_witnesses) {
  IrreducibilityReport report;
  report.component_count = count_components(graph);
  report.irreducible = report.component_count == 1;
  if (!report.irreducible) return report;

  // Breadth-first search from every vertex; the parent family of each
  // reached vertex spells the shortest witness word.
  const std::size_t n = graph.vertex_count();
  std::vector<std::size_t> dist(n), parent(n);
  for (std::size_t source = 0; source < n; ++source) {
    std::fill(dist.begin(), dist.end(), kUnreached);
    std::fill(parent.begin(), parent.end(), kUnreached);
    dist[source] = 0;
    std::queue<std::size_t> queue;
    queue.push(source);
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop();
      // Out-families are sorted by |digit|, so witnesses use the smallest digits.
      for (std::size_t id : graph.out_families(v)) {
        const auto& fam = graph.families()[id];
        if (!fam.active || dist[fam.to] != kUnreached) continue;
        dist[fam.to] = dist[v] + 1;
        parent[fam.to] = id;
        queue.push(fam.to);
      }
    }
    for (std::size_t target = 0; target < n; ++target) {
      report.diameter = std::max(report.diameter, dist[target]);
      if (!emit_witnesses) continue;
      Witness w;
      w.from = source;
      w.to = target;
      std::vector<std::size_t> path;
      for (std::size_t v = target; v != source; v = graph.families()[parent[v]].from) {
        path.push_back(parent[v]);
      }
      std::reverse(path.begin(), path.end());
      for (std::size_t id : path) {
        const auto& fam = graph.families()[id];
        w.word.entries.push_back({Integer(static_cast<long>(fam.digit)), graph.vertex(fam.from).coset});
      }
      report.witnesses.push_back(std::move(w));
    }
  }
  return report;
}

bool is_admissible(const SymbolSequence& seq, const CosetTable& table) {
  const auto& entries = seq.entries;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (sgn(entries[i].digit) == 0 || entries[i].coset >= table.size()) return false;
    if (i + 1 < entries.size()) {
      if (sgn(entries[i].digit) * sgn(entries[i + 1].digit) >= 0) return false;
      if (table.tau(entries[i].digit, entries[i].coset) != entries[i + 1].coset) return false;
    }
  }
  return true;
}

bool verify_witness(const TransitionGraph& graph, const Witness& w) {
  const auto& entries = w.word.entries;
  if (entries.empty()) return w.from == w.to;
  if (!is_admissible(w.word, graph.table())) return false;
  return graph.initial_vertex(entries.front()) == w.from && graph.terminal_vertex(entries.back()) == w.to;
}

nlohmann::json witnesses_to_json(const TransitionGraph& graph, const std::vector<Witness>& witnesses) {
  const CosetTable& table = graph.table();
  auto vertex_json = [&](std::size_t index) {
    const VertexState v = graph.vertex(index);
    const P1Point& p = table.rep(v.coset);
    return nlohmann::json::array({p.c, p.d, v.sign});
  };
  nlohmann::json out = nlohmann::json::array();
  for (const Witness& w : witnesses) {
    nlohmann::json word = nlohmann::json::array();
    for (const SymbolEntry& entry : w.word.entries) {
      const P1Point& p = table.rep(entry.coset);
      word.push_back({entry.digit.get_si(), p.c, p.d});
    }
    out.push_back({{"from", vertex_json(w.from)}, {"to", vertex_json(w.to)}, {"word", word}});
  }
  return out;
}

}  // namespace modshift
