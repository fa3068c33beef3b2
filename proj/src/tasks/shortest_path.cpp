#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

#include "ptodist/tasks.hpp"

namespace ptodist::tasks {

std::vector<std::size_t> grid_neighbors(std::size_t side, Neighborhood nb, std::size_t cell) {
  const long r = static_cast<long>(cell / side);
  const long c = static_cast<long>(cell % side);
  const long s = static_cast<long>(side);
  std::vector<std::size_t> out;
  out.reserve(8);
  for (long dr = -1; dr <= 1; ++dr) {
    for (long dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      if (nb == Neighborhood::four && dr != 0 && dc != 0) continue;
      const long rr = r + dr, cc = c + dc;
      if (rr < 0 || cc < 0 || rr >= s || cc >= s) continue;
      out.push_back(static_cast<std::size_t>(rr * s + cc));
    }
  }
  return out;
}

std::vector<std::size_t> shortest_path_cells(const GridParams& params,
                                             std::span<const double> costs) {
  const std::size_t cells = params.side * params.side;
  if (costs.size() != cells) throw std::invalid_argument("shortest path: cost grid size mismatch");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  const std::size_t source = 0, sink = cells - 1;
  auto weight = [&](std::size_t c) { return costs[c] + params.length_penalty; };

  std::vector<double> dist(cells, kInf);
  std::vector<std::size_t> prev(cells, kNone);
  std::vector<char> done(cells, 0);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[source] = params.count_start ? weight(source) : 0.0;
  heap.emplace(dist[source], source);
  while (!heap.empty()) {
    const auto [d, c] = heap.top();
    heap.pop();
    if (done[c]) continue;
    done[c] = 1;
    if (c == sink) break;
    for (std::size_t nb : grid_neighbors(params.side, params.neighborhood, c)) {
      const double nd = d + weight(nb);
      if (nd < dist[nb]) {
        dist[nb] = nd;
        prev[nb] = c;
        heap.emplace(nd, nb);
      }
    }
  }
  std::vector<std::size_t> path;
  for (std::size_t c = sink; c != kNone; c = prev[c]) path.push_back(c);
  std::reverse(path.begin(), path.end());
  return path;
}

double path_cost(const GridParams& params, std::span<const double> mask,
                 std::span<const double> costs) {
  double total = 0.0;
  for (std::size_t c = 0; c < mask.size(); ++c) total += mask[c] * (costs[c] + params.length_penalty);
  if (!params.count_start) total -= mask[0] * (costs[0] + params.length_penalty);
  return total;
}

}  // namespace ptodist::tasks
