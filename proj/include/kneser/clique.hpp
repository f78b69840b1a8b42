#pragma once

// Exact clique search on dense bitset graphs. Independent-set problems are
// posed as clique problems on the complement adjacency.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "kneser/bitset.hpp"
#include "kneser/error.hpp"

namespace kneser {

struct SearchBudget {
  std::uint64_t max_nodes = 1'000'000'000ULL;
  double max_seconds = 0.0;  // 0 = unlimited
};

struct SearchStats {
  std::uint64_t nodes = 0;
  double seconds = 0.0;
};

namespace detail {

class BudgetGuard {
 public:
  explicit BudgetGuard(const SearchBudget& budget) : budget_(budget), start_(std::chrono::steady_clock::now()) {}

  /// Counts one node; throws ScaleLimit once the budget is exhausted.
  void tick() {
    std::uint64_t n = nodes_.fetch_add(1, std::memory_order_relaxed) + 1;
    if (n > budget_.max_nodes) throw Error(ErrorCode::ScaleLimit, "node budget exceeded");
    if (budget_.max_seconds > 0.0 && (n & 0x3FFF) == 0 && elapsed() > budget_.max_seconds)
      throw Error(ErrorCode::ScaleLimit, "wall-time budget exceeded");
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  SearchStats stats() const { return {nodes_.load(), elapsed()}; }

 private:
  SearchBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::atomic<std::uint64_t> nodes_{0};
};

/// Greedy sequential coloring of `cand`: fills `order` and `color` so that
/// color[i] is a valid clique bound for {order[0..i]}.
inline void color_sort(std::span<const Bitset> adj, const Bitset& cand, std::vector<std::size_t>& order,
                       std::vector<int>& color) {
  order.clear();
  color.clear();
  Bitset uncolored = cand;
  Bitset avail(cand.size());
  int k = 0;
  while (uncolored.any()) {
    ++k;
    avail = uncolored;
    for (std::size_t v = avail.first(); v < avail.size(); v = avail.next(v + 1)) {
      uncolored.reset(v);
      avail.subtract(adj[v]);
      order.push_back(v);
      color.push_back(k);
    }
  }
}

/// Number of colors of a greedy coloring of `cand`.
inline int coloring_bound(std::span<const Bitset> adj, const Bitset& cand) {
  Bitset uncolored = cand;
  Bitset avail(cand.size());
  int k = 0;
  while (uncolored.any()) {
    ++k;
    avail = uncolored;
    for (std::size_t v = avail.first(); v < avail.size(); v = avail.next(v + 1)) {
      uncolored.reset(v);
      avail.subtract(adj[v]);
    }
  }
  return k;
}

template <typename F>
void run_workers(unsigned workers, std::size_t tasks, F&& body) {
  workers = std::max(1U, workers);
  if (workers == 1 || tasks < 2) {
    for (std::size_t t = 0; t < tasks; ++t) body(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t t; (t = next.fetch_add(1)) < tasks;) {
        try {
          body(t);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next.store(tasks);
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

struct CliqueResult {
  std::vector<std::size_t> clique;  // sorted
  SearchStats stats;
};

/// Maximum clique inside `cand` by branch and bound with greedy-coloring
/// bounds. `lower_bound` seeds the incumbent size (a clique of that size is
/// not required to exist; if nothing larger is found the result is empty).
inline CliqueResult max_clique(std::span<const Bitset> adj, const Bitset& cand, const SearchBudget& budget = {},
                               unsigned workers = 1, std::size_t lower_bound = 0) {
  detail::BudgetGuard guard(budget);
  std::atomic<std::size_t> best_size{lower_bound};
  std::vector<std::size_t> best;
  std::mutex best_mu;

  auto offer = [&](const std::vector<std::size_t>& r) {
    std::lock_guard lock(best_mu);
    if (r.size() > best_size.load() || (r.size() == best_size.load() && best.empty())) {
      best = r;
      best_size.store(r.size());
    }
  };

  std::function<void(std::vector<std::size_t>&, Bitset&)> expand = [&](std::vector<std::size_t>& r, Bitset& p) {
    guard.tick();
    std::vector<std::size_t> order;
    std::vector<int> color;
    detail::color_sort(adj, p, order, color);
    for (std::size_t i = order.size(); i-- > 0;) {
      if (r.size() + static_cast<std::size_t>(color[i]) <= best_size.load(std::memory_order_relaxed)) return;
      std::size_t v = order[i];
      r.push_back(v);
      Bitset np = p & adj[v];
      if (np.none()) {
        if (r.size() > best_size.load()) offer(r);
      } else {
        expand(r, np);
      }
      r.pop_back();
      p.reset(v);
    }
  };

  std::vector<std::size_t> order;
  std::vector<int> color;
  detail::color_sort(adj, cand, order, color);
  detail::run_workers(workers, order.size(), [&](std::size_t t) {
    std::size_t i = order.size() - 1 - t;
    if (static_cast<std::size_t>(color[i]) <= best_size.load()) return;
    std::size_t v = order[i];
    Bitset p(cand.size());
    for (std::size_t j = 0; j < i; ++j) p.set(order[j]);
    p &= adj[v];
    std::vector<std::size_t> r{v};
    if (p.none()) {
      if (r.size() > best_size.load()) offer(r);
    } else {
      expand(r, p);
    }
  });

  CliqueResult out{best, guard.stats()};
  std::sort(out.clique.begin(), out.clique.end());
  return out;
}

/// Bron-Kerbosch enumeration with Tomita pivoting of every maximal clique
/// of size >= threshold that contains `r` and extends into `p`; `x` holds the
/// vertices that already certify non-maximality when adjacent to all of r.
/// Branches whose coloring bound cannot reach the threshold are cut.
class MaximalCliqueEnumerator {
 public:
  using Visitor = std::function<void(const std::vector<std::size_t>&)>;

  MaximalCliqueEnumerator(std::span<const Bitset> adj, std::size_t threshold, detail::BudgetGuard& guard)
      : adj_(adj), threshold_(threshold), guard_(guard) {}

  void run(std::vector<std::size_t>& r, Bitset p, Bitset x, const Visitor& visit) { expand(r, p, x, visit); }

 private:
  void expand(std::vector<std::size_t>& r, Bitset& p, Bitset& x, const Visitor& visit) {
    guard_.tick();
    if (p.none()) {
      if (x.none() && r.size() >= threshold_) visit(r);
      return;
    }
    if (r.size() + p.count() < threshold_) return;
    if (r.size() + static_cast<std::size_t>(detail::coloring_bound(adj_, p)) < threshold_) return;

    // pivot maximizing |P ∩ N(u)| over P ∪ X
    std::size_t pivot = p.first();
    std::size_t best = 0;
    auto consider = [&](std::size_t u) {
      std::size_t c = p.intersection_count(adj_[u]);
      if (c > best || (c == best && u < pivot)) {
        best = c;
        pivot = u;
      }
    };
    best = p.intersection_count(adj_[pivot]);
    p.for_each(consider);
    x.for_each(consider);

    Bitset branch = p;
    branch.subtract(adj_[pivot]);
    for (std::size_t v = branch.first(); v < branch.size(); v = branch.next(v + 1)) {
      r.push_back(v);
      Bitset np = p & adj_[v];
      Bitset nx = x & adj_[v];
      expand(r, np, nx, visit);
      r.pop_back();
      p.reset(v);
      x.set(v);
      if (r.size() + p.count() < threshold_) break;
    }
  }

  std::span<const Bitset> adj_;
  std::size_t threshold_;
  detail::BudgetGuard& guard_;
};

struct MaximalCliques {
  std::vector<std::vector<std::size_t>> cliques;  // each sorted; list sorted
  SearchStats stats;
};

/// All maximal cliques of size >= threshold of the graph restricted to the
/// vertices in `universe`, partitioned by their smallest vertex so the outer
/// loop can be spread over workers.
inline MaximalCliques enumerate_maximal_cliques(std::span<const Bitset> adj, const Bitset& universe,
                                                std::size_t threshold, const SearchBudget& budget = {},
                                                unsigned workers = 1) {
  detail::BudgetGuard guard(budget);
  std::vector<std::size_t> verts = universe.indices();
  std::vector<std::vector<std::vector<std::size_t>>> per_task(verts.size());
  detail::run_workers(workers, verts.size(), [&](std::size_t t) {
    std::size_t v = verts[t];
    Bitset later(universe.size());
    Bitset earlier(universe.size());
    for (std::size_t j = 0; j < verts.size(); ++j) (j < t ? earlier : later).set(verts[j]);
    later.reset(v);
    Bitset p = later & adj[v];
    Bitset x = earlier & adj[v];
    std::vector<std::size_t> r{v};
    MaximalCliqueEnumerator en(adj, threshold, guard);
    en.run(r, p, x, [&](const std::vector<std::size_t>& c) {
      auto s = c;
      std::sort(s.begin(), s.end());
      per_task[t].push_back(std::move(s));
    });
  });
  MaximalCliques out;
  for (auto& v : per_task)
    for (auto& c : v) out.cliques.push_back(std::move(c));
  std::sort(out.cliques.begin(), out.cliques.end());
  out.stats = guard.stats();
  return out;
}

/// Maximal cliques of size >= threshold that contain `anchor`.
inline MaximalCliques enumerate_maximal_cliques_containing(std::span<const Bitset> adj, const Bitset& universe,
                                                           std::size_t anchor, std::size_t threshold,
                                                           const SearchBudget& budget = {}) {
  detail::BudgetGuard guard(budget);
  MaximalCliques out;
  std::vector<std::size_t> r{anchor};
  Bitset p = universe & adj[anchor];
  MaximalCliqueEnumerator en(adj, threshold, guard);
  en.run(r, p, Bitset(universe.size()), [&](const std::vector<std::size_t>& c) {
    auto s = c;
    std::sort(s.begin(), s.end());
    out.cliques.push_back(std::move(s));
  });
  std::sort(out.cliques.begin(), out.cliques.end());
  out.stats = guard.stats();
  return out;
}

}  // namespace kneser
