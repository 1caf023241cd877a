#include "qrdmft/grouping.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace qrdmft {

namespace {

using Graph = std::vector<std::vector<std::size_t>>;  // adjacency: conflicting pairs

Graph conflict_graph(const std::vector<PauliTerm>& terms, CommutationLevel level) {
  Graph g(terms.size());
  for (std::size_t a = 0; a < terms.size(); ++a) {
    for (std::size_t b = a + 1; b < terms.size(); ++b) {
      if (!commutes(terms[a], terms[b], level)) {
        g[a].push_back(b);
        g[b].push_back(a);
      }
    }
  }
  return g;
}

std::size_t smallest_free_color(const Graph& g, std::size_t v, const std::vector<long>& color) {
  std::vector<bool> taken(g[v].size() + 1, false);
  for (auto u : g[v]) {
    const long c = color[u];
    if (c >= 0 && static_cast<std::size_t>(c) < taken.size()) taken[static_cast<std::size_t>(c)] = true;
  }
  std::size_t c = 0;
  while (taken[c]) ++c;
  return c;
}

std::vector<long> color_in_order(const Graph& g, const std::vector<std::size_t>& order) {
  std::vector<long> color(g.size(), -1);
  for (auto v : order) color[v] = static_cast<long>(smallest_free_color(g, v, color));
  return color;
}

std::vector<long> largest_first(const Graph& g) {
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return g[a].size() > g[b].size(); });
  return color_in_order(g, order);
}

std::vector<long> random_sequential(const Graph& g, std::uint64_t seed) {
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
  return color_in_order(g, order);
}

std::vector<long> dsatur(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<long> color(n, -1);
  std::vector<std::vector<bool>> seen(n);
  std::vector<std::size_t> saturation(n, 0);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (color[v] >= 0) continue;
      if (best == n || saturation[v] > saturation[best] ||
          (saturation[v] == saturation[best] && g[v].size() > g[best].size())) {
        best = v;
      }
    }
    const std::size_t c = smallest_free_color(g, best, color);
    color[best] = static_cast<long>(c);
    for (auto u : g[best]) {
      if (seen[u].size() <= c) seen[u].resize(c + 1, false);
      if (!seen[u][c]) {
        seen[u][c] = true;
        ++saturation[u];
      }
    }
  }
  return color;
}

std::size_t color_count(const std::vector<long>& color) {
  long m = -1;
  for (long c : color) m = std::max(m, c);
  return static_cast<std::size_t>(m + 1);
}

std::vector<std::vector<std::size_t>> to_groups(const std::vector<long>& color) {
  std::vector<std::vector<std::size_t>> groups(color_count(color));
  for (std::size_t v = 0; v < color.size(); ++v) groups[static_cast<std::size_t>(color[v])].push_back(v);
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return groups;
}

}  // namespace

std::string_view to_string(ColoringStrategy s) {
  switch (s) {
    case ColoringStrategy::LargestFirst: return "largest_first";
    case ColoringStrategy::Dsatur: return "dsatur";
    case ColoringStrategy::RandomSequential: return "random_sequential";
    case ColoringStrategy::Best: return "best";
  }
  return "?";
}

ColoringStrategy parse_coloring_strategy(std::string_view text) {
  for (auto s : {ColoringStrategy::LargestFirst, ColoringStrategy::Dsatur,
                 ColoringStrategy::RandomSequential, ColoringStrategy::Best}) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument("unknown coloring strategy '" + std::string(text) + "'");
}

std::vector<std::vector<std::size_t>> group_paulis(const std::vector<PauliTerm>& terms,
                                                   CommutationLevel level, std::uint64_t seed,
                                                   ColoringStrategy strategy) {
  if (terms.empty()) return {};
  for (const auto& t : terms) {
    if (t.n_qubits() != terms.front().n_qubits()) throw std::invalid_argument("Pauli words differ in qubit count");
  }
  const Graph g = conflict_graph(terms, level);
  std::vector<long> color;
  switch (strategy) {
    case ColoringStrategy::LargestFirst: color = largest_first(g); break;
    case ColoringStrategy::Dsatur: color = dsatur(g); break;
    case ColoringStrategy::RandomSequential: color = random_sequential(g, seed); break;
    case ColoringStrategy::Best: {
      auto lf = largest_first(g);
      auto ds = dsatur(g);
      color = color_count(ds) < color_count(lf) ? std::move(ds) : std::move(lf);
      break;
    }
  }
  return to_groups(color);
}

}  // namespace qrdmft
