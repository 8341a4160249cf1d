#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace smg::graph {

// Iterative Tarjan. `succ(v, f)` calls f(w) for every successor w of v;
// only vertices with in[v] set take part. Components come out sinks first
// (reverse topological order).
template <class Succ>
std::vector<std::vector<std::uint32_t>> tarjan(std::uint32_t n, const std::vector<char>& in, Succ&& succ) {
  constexpr std::uint32_t kUnseen = UINT32_MAX;
  std::vector<std::uint32_t> index(n, kUnseen), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> adj_buf;
  struct Frame {
    std::uint32_t v;
    std::vector<std::uint32_t> adj;
    std::size_t next;
  };
  std::vector<Frame> call;
  std::uint32_t counter = 0;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (!in[root] || index[root] != kUnseen)
      continue;
    auto push = [&](std::uint32_t v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = 1;
      Frame f{v, {}, 0};
      succ(v, [&](std::uint32_t w) {
        if (in[w])
          f.adj.push_back(w);
      });
      call.push_back(std::move(f));
    };
    push(root);
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < f.adj.size()) {
        std::uint32_t w = f.adj[f.next++];
        if (index[w] == kUnseen) {
          push(w);
        } else if (on_stack[w]) {
          if (index[w] < low[f.v])
            low[f.v] = index[w];
        }
        continue;
      }
      std::uint32_t v = f.v;
      if (low[v] == index[v]) {
        std::vector<std::uint32_t> comp;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        out.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty() && low[v] < low[call.back().v])
        low[call.back().v] = low[v];
    }
  }
  return out;
}

}  // namespace smg::graph
