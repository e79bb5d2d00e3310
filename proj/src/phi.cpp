#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <thread>

#include "jigsaw/error.hpp"
#include "jigsaw/randomness.hpp"
#include "jigsaw/theory.hpp"

namespace jigsaw::theory {

namespace {

// Sites of Q_k with the origin at index 0; neighbour and line masks as bitsets.
struct Triangle {
  int k = 0;
  std::vector<std::uint32_t> nbr;
  std::vector<char> on_line;
  std::uint32_t line_mask = 0;

  explicit Triangle(int k_) : k(k_) {
    std::vector<std::pair<int, int>> sites;
    for (int s = 0; s <= k; ++s) {
      for (int x = 0; x <= s; ++x) sites.emplace_back(x, s - x);
    }
    auto index = [&](int x, int y) -> int {
      if (x < 0 || y < 0 || x + y > k) return -1;
      const auto it = std::find(sites.begin(), sites.end(), std::make_pair(x, y));
      return static_cast<int>(it - sites.begin());
    };
    nbr.assign(sites.size(), 0);
    on_line.assign(sites.size(), 0);
    for (std::size_t i = 0; i < sites.size(); ++i) {
      const auto [x, y] = sites[i];
      for (const auto& [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        const int j = index(x + dx, y + dy);
        if (j >= 0) nbr[i] |= std::uint32_t{1} << j;
      }
      if (x + y == k) {
        on_line[i] = 1;
        line_mask |= std::uint32_t{1} << i;
      }
    }
  }

  int sites() const { return static_cast<int>(nbr.size()); }
};

std::vector<double> exact_weights(const Triangle& tri, int target, unsigned parallelism) {
  const int M = tri.sites() - 1;
  const std::uint64_t total = std::uint64_t{1} << M;
  const unsigned workers = std::max(1u, parallelism);
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(M + 1, 0));

  auto work = [&](unsigned w) {
    auto& counts = partial[w];
    const std::uint64_t begin = total * w / workers;
    const std::uint64_t end = total * (w + 1) / workers;
    for (std::uint64_t mask = begin; mask < end; ++mask) {
      const std::uint32_t open = (static_cast<std::uint32_t>(mask) << 1) | 1u;
      if ((open & tri.nbr[0]) == 0) continue;
      std::uint32_t visited = 1;
      std::uint32_t frontier = 1;
      while (frontier != 0) {
        std::uint32_t next = 0;
        for (std::uint32_t f = frontier; f != 0; f &= f - 1) next |= tri.nbr[std::countr_zero(f)];
        next &= open & ~visited;
        visited |= next;
        frontier = next;
      }
      if ((visited & tri.line_mask) != 0 && std::popcount(visited) >= target) {
        ++counts[std::popcount(static_cast<std::uint32_t>(mask))];
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::vector<double> weights(M + 1, 0.0);
  for (const auto& counts : partial) {
    for (int j = 0; j <= M; ++j) weights[j] += static_cast<double>(counts[j]);
  }
  return weights;
}

// Opens sites in a random order and returns the number opened (origin
// excluded) when the origin's cluster first becomes good.
int first_good_prefix(const Triangle& tri, int target, SplitMix64& rng, std::vector<int>& order,
                      std::vector<int>& parent, std::vector<int>& size, std::vector<char>& line,
                      std::vector<char>& open) {
  const int n = tri.sites();
  std::iota(order.begin(), order.end(), 1);
  for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }
  std::fill(open.begin(), open.end(), 0);
  for (int i = 0; i < n; ++i) {
    parent[i] = i;
    size[i] = 1;
    line[i] = tri.on_line[i];
  }
  open[0] = 1;
  auto find = [&](int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (int j = 0; j < static_cast<int>(order.size()); ++j) {
    const int s = order[j];
    open[s] = 1;
    for (std::uint32_t m = tri.nbr[s]; m != 0; m &= m - 1) {
      const int t = std::countr_zero(m);
      if (!open[t]) continue;
      int a = find(s);
      int b = find(t);
      if (a == b) continue;
      if (size[a] < size[b]) std::swap(a, b);
      parent[b] = a;
      size[a] += size[b];
      line[a] = line[a] || line[b];
    }
    const int r = find(0);
    if (line[r] && size[r] >= target) return j + 1;
  }
  return static_cast<int>(order.size()) + 1;
}

std::vector<double> sampled_weights(const Triangle& tri, int target, std::size_t trials, std::uint64_t seed,
                                    unsigned parallelism) {
  const int M = tri.sites() - 1;
  const unsigned workers = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(trials)));
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(M + 2, 0));
  auto work = [&](unsigned w) {
    std::vector<int> order(M), parent(M + 1), size(M + 1);
    std::vector<char> line(M + 1), open(M + 1);
    for (std::size_t i = w; i < trials; i += workers) {
      SplitMix64 rng(derive_seed(seed, i));
      ++partial[w][first_good_prefix(tri, target, rng, order, parent, size, line, open)];
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::vector<double> weights(M + 1, 0.0);
  std::uint64_t cumulative = 0;
  for (int j = 0; j <= M; ++j) {
    for (const auto& h : partial) cumulative += h[j];
    const double log_choose = std::lgamma(M + 1.0) - std::lgamma(j + 1.0) - std::lgamma(M - j + 1.0);
    weights[j] = std::exp(log_choose) * static_cast<double>(cumulative) / static_cast<double>(trials);
  }
  return weights;
}

}  // namespace

Phi::Phi(const PhiSpec& spec) : spec_(spec) {
  if (spec.k < 1) throw UsageError("phi: k must be >= 1");
  if (spec.ell < 0) throw UsageError("phi: ell must be >= 0");
  const Triangle tri(spec.k);
  M_ = tri.sites() - 1;
  const int target = spec.k + 1 + spec.ell;
  if (target > tri.sites()) throw UsageError("phi: k + 1 + ell exceeds |Q_k|");
  if (spec.mode == PhiMode::Exact) {
    if (spec.k > kPhiExactMaxK) throw UsageError("phi: exact mode requires k <= 6");
    weights_ = exact_weights(tri, target, spec.parallelism);
  } else {
    if (spec.trials == 0) throw UsageError("phi: trials must be >= 1");
    weights_ = sampled_weights(tri, target, spec.trials, spec.seed, spec.parallelism);
  }
}

double Phi::operator()(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("phi: r must lie in [0, 1]");
  if (r == 0.0) return weights_[0];
  if (r == 1.0) return weights_[M_];
  const double lr = std::log(r);
  const double lq = std::log1p(-r);
  double sum = 0.0;
  for (int j = 0; j <= M_; ++j) {
    if (weights_[j] != 0.0) sum += weights_[j] * std::exp(j * lr + (M_ - j) * lq);
  }
  return std::min(sum, 1.0);
}

}  // namespace jigsaw::theory
