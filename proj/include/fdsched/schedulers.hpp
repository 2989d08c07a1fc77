#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fdsched/model.hpp"

namespace fdsched {

enum class PolicyTag { MaxWeightSearch, GreedyMGG, BruteForce, HalfDuplexMW, NaiveLQF };

inline const char* policy_name(PolicyTag tag) {
  switch (tag) {
    case PolicyTag::MaxWeightSearch: return "maxweight";
    case PolicyTag::GreedyMGG: return "greedy";
    case PolicyTag::BruteForce: return "brute-force";
    case PolicyTag::HalfDuplexMW: return "halfduplex";
    case PolicyTag::NaiveLQF: return "lqf";
  }
  return "?";
}

struct ScheduleResult {
  Schedule schedule;
  // Equals weight(schedule, queues, config) for the inputs that produced it,
  // except for HalfDuplexMW where it is the half-duplex weight
  // (K - m) * (sum of the m scheduled queues).
  Weight weight = 0;
  PolicyTag policy = PolicyTag::MaxWeightSearch;
};

// Users sorted by queue length descending, ties by ascending user id. This is
// the LQF order used by every scheduler below.
inline std::vector<UserId> users_by_queue_desc(const QueueState& q,
                                               const SystemConfig& cfg) {
  check_dims(q, cfg);
  std::vector<UserId> order(static_cast<std::size_t>(cfg.n_users()));
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = static_cast<UserId>(i + 1);
  std::stable_sort(order.begin(), order.end(), [&q](UserId a, UserId b) {
    if (q.of(a) != q.of(b)) return q.of(a) > q.of(b);
    return a < b;
  });
  return order;
}

namespace detail {

// Weight of the LQF schedule that probes the `need[g]` longest-queue users of
// each group. `order` is the global LQF order with precomputed groups/queues.
// The user placed p-th (1-based) receives rate K - p - (same-group users
// placed after it), since every later selected user of another group and
// every trailing dummy slot contributes one packet.
struct SelectionScan {
  const std::vector<GroupId>& order_group;
  const std::vector<QueueLen>& order_queue;
  int k;

  Weight weight_of(const std::vector<int>& m, std::vector<int>& need) const {
    need = m;
    int placed = 0;
    int omega = 0;
    for (int c : m) omega += c;
    Weight w = 0;
    for (std::size_t idx = 0; idx < order_group.size() && placed < omega; ++idx) {
      int& left = need[static_cast<std::size_t>(order_group[idx] - 1)];
      if (left == 0) continue;
      --left;
      ++placed;
      w += order_queue[idx] * static_cast<Weight>(k - placed - left);
    }
    return w;
  }

  // Selected user ids in schedule order for the same selection.
  std::vector<UserId> schedule_users(const std::vector<int>& m,
                                     const std::vector<UserId>& order) const {
    std::vector<int> need = m;
    int omega = 0;
    for (int c : m) omega += c;
    std::vector<UserId> users;
    users.reserve(static_cast<std::size_t>(omega));
    for (std::size_t idx = 0; idx < order.size() &&
                              static_cast<int>(users.size()) < omega; ++idx) {
      int& left = need[static_cast<std::size_t>(order_group[idx] - 1)];
      if (left == 0) continue;
      --left;
      users.push_back(order[idx]);
    }
    return users;
  }
};

inline Schedule leading_slots(const std::vector<UserId>& users, int k) {
  Schedule f = Schedule::all_dummy(k);
  for (std::size_t i = 0; i < users.size(); ++i) f.slots[i] = users[i];
  return f;
}

}  // namespace detail

// Exhaustive search over per-group selection counts. For every m with
// sum(m_i) <= K and m_i <= |group i|, probes the m_i longest-queue users of
// each group in LQF order and keeps a maximum-weight schedule. Ties across
// selection vectors go to the first one in lexicographic enumeration order.
// Complexity O((N/I)^I * N) against O(N!) for unrestricted search.
inline ScheduleResult maxweight_search(const QueueState& q,
                                       const SystemConfig& cfg) {
  const int k = cfg.k_minislots();
  const int ng = cfg.n_groups();
  const std::vector<UserId> order = users_by_queue_desc(q, cfg);

  std::vector<GroupId> order_group(order.size());
  std::vector<QueueLen> order_queue(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order_group[i] = cfg.group_of(order[i]);
    order_queue[i] = q.of(order[i]);
  }
  const detail::SelectionScan scan{order_group, order_queue, k};

  std::vector<int> caps(static_cast<std::size_t>(ng));
  for (int g = 1; g <= ng; ++g)
    caps[static_cast<std::size_t>(g - 1)] = std::min(cfg.group_size(g), k);

  std::vector<int> m(static_cast<std::size_t>(ng), 0);
  std::vector<int> best_m = m;
  std::vector<int> scratch(static_cast<std::size_t>(ng));
  Weight best_w = -1;

  // Depth-first counting over m, pruning branches whose partial sum already
  // reaches K.
  auto visit = [&](auto&& self, int g, int sum) -> void {
    if (g == ng) {
      const Weight w = scan.weight_of(m, scratch);
      if (w > best_w) {
        best_w = w;
        best_m = m;
      }
      return;
    }
    const int cap = std::min(caps[static_cast<std::size_t>(g)], k - sum);
    for (int c = 0; c <= cap; ++c) {
      m[static_cast<std::size_t>(g)] = c;
      self(self, g + 1, sum + c);
    }
    m[static_cast<std::size_t>(g)] = 0;
  };
  visit(visit, 0, 0);

  Schedule f = detail::leading_slots(scan.schedule_users(best_m, order), k);
  return ScheduleResult{std::move(f), best_w, PolicyTag::MaxWeightSearch};
}

// Marginal gain-based greedy: scan users in LQF order and append each to the
// next open slot iff its marginal gain there is nonnegative; stop after K
// placements. O(N log N).
inline ScheduleResult greedy_mgg(const QueueState& q, const SystemConfig& cfg) {
  const int k = cfg.k_minislots();
  const std::vector<UserId> order = users_by_queue_desc(q, cfg);
  Schedule f = Schedule::all_dummy(k);
  std::vector<Weight> blocked(static_cast<std::size_t>(cfg.n_groups()), 0);
  int index = 1;
  for (UserId u : order) {
    if (index > k) break;
    const GroupId g = cfg.group_of(u);
    const Weight delta =
        q.of(u) * static_cast<Weight>(k - index) - blocked[static_cast<std::size_t>(g - 1)];
    if (delta >= 0) {
      f.slots[static_cast<std::size_t>(index - 1)] = u;
      blocked[static_cast<std::size_t>(g - 1)] += q.of(u);
      ++index;
    }
  }
  const Weight w = weight(f, q, cfg);
  return ScheduleResult{std::move(f), w, PolicyTag::GreedyMGG};
}

enum class BruteForceMode {
  // Every length-K vector of distinct user ids and dummies, interior dummies
  // included. Exists so that the no-interior-zeros normalization can itself
  // be validated against an unrestricted search.
  FullVectors,
  // Every subset of at most min(N, K) users in every order, placed in the
  // leading slots.
  SubsetPermutations,
};

namespace detail {

// Weight of the schedule placing `users` in the leading slots, computed from
// per-group remaining counts. O(|users| * I).
inline Weight leading_weight(const std::vector<UserId>& users,
                             const QueueState& q, const SystemConfig& cfg,
                             std::vector<int>& group_left) {
  group_left.assign(static_cast<std::size_t>(cfg.n_groups()), 0);
  for (UserId u : users)
    ++group_left[static_cast<std::size_t>(cfg.group_of(u) - 1)];
  const int k = cfg.k_minislots();
  Weight w = 0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    int& left = group_left[static_cast<std::size_t>(cfg.group_of(users[i]) - 1)];
    --left;
    w += q.of(users[i]) *
         static_cast<Weight>(k - static_cast<int>(i) - 1 - left);
  }
  return w;
}

}  // namespace detail

// Reference enumerations for small instances; throws InstanceTooLargeError
// above the per-mode size bounds (N, K <= 6 for FullVectors, <= 8 for
// SubsetPermutations). Ties go to the first maximum in enumeration order.
inline ScheduleResult brute_force_maxweight(const QueueState& q,
                                            const SystemConfig& cfg,
                                            BruteForceMode mode) {
  check_dims(q, cfg);
  const int n = cfg.n_users();
  const int k = cfg.k_minislots();

  Schedule best = Schedule::all_dummy(k);
  Weight best_w = -1;

  if (mode == BruteForceMode::FullVectors) {
    if (n > 6 || k > 6)
      throw InstanceTooLargeError(
          "FullVectors brute force requires N <= 6 and K <= 6");
    Schedule cur = Schedule::all_dummy(k);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    auto visit = [&](auto&& self, int slot) -> void {
      if (slot == k) {
        const Weight w = weight(cur, q, cfg);
        if (w > best_w) {
          best_w = w;
          best = cur;
        }
        return;
      }
      for (UserId u = 0; u <= n; ++u) {
        if (u != kDummyUser && used[static_cast<std::size_t>(u)]) continue;
        cur.slots[static_cast<std::size_t>(slot)] = u;
        if (u != kDummyUser) used[static_cast<std::size_t>(u)] = 1;
        self(self, slot + 1);
        if (u != kDummyUser) used[static_cast<std::size_t>(u)] = 0;
      }
      cur.slots[static_cast<std::size_t>(slot)] = kDummyUser;
    };
    visit(visit, 0);
  } else {
    if (n > 8 || k > 8)
      throw InstanceTooLargeError(
          "SubsetPermutations brute force requires N <= 8 and K <= 8");
    std::vector<int> group_left;
    std::vector<UserId> subset;
    const unsigned max_mask = 1u << n;
    for (unsigned mask = 0; mask < max_mask; ++mask) {
      if (std::popcount(mask) > k) continue;
      subset.clear();
      for (int u = 1; u <= n; ++u)
        if (mask & (1u << (u - 1))) subset.push_back(u);
      std::vector<UserId> perm = subset;
      do {
        const Weight w = detail::leading_weight(perm, q, cfg, group_left);
        if (w > best_w) {
          best_w = w;
          best = detail::leading_slots(perm, k);
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  return ScheduleResult{std::move(best), best_w, PolicyTag::BruteForce};
}

// Half-duplex baseline: the m probed users occupy the first m mini-slots and
// each receives rate K - m from the remaining ones; no probing/transmission
// concurrency, so group structure is irrelevant. Scans all m in 0..min(N, K)
// with the m longest queues and keeps the maximizer (ties to smaller m).
inline ScheduleResult halfduplex_maxweight(const QueueState& q,
                                           const SystemConfig& cfg) {
  const int k = cfg.k_minislots();
  const std::vector<UserId> order = users_by_queue_desc(q, cfg);
  const int m_max = std::min(cfg.n_users(), k);

  Weight best_w = 0;
  int best_m = 0;
  Weight prefix = 0;
  for (int m = 1; m <= m_max; ++m) {
    prefix += q.of(order[static_cast<std::size_t>(m - 1)]);
    const Weight w = static_cast<Weight>(k - m) * prefix;
    if (w > best_w) {
      best_w = w;
      best_m = m;
    }
  }
  Schedule f = Schedule::all_dummy(k);
  for (int i = 0; i < best_m; ++i)
    f.slots[static_cast<std::size_t>(i)] = order[static_cast<std::size_t>(i)];
  return ScheduleResult{std::move(f), best_w, PolicyTag::HalfDuplexMW};
}

// Longest-queue-first without marginal-gain screening: fills the leading
// slots with the min(N, K) longest queues regardless of interference.
inline ScheduleResult naive_lqf(const QueueState& q, const SystemConfig& cfg) {
  const int k = cfg.k_minislots();
  const std::vector<UserId> order = users_by_queue_desc(q, cfg);
  const int take = std::min(cfg.n_users(), k);
  Schedule f = Schedule::all_dummy(k);
  for (int i = 0; i < take; ++i)
    f.slots[static_cast<std::size_t>(i)] = order[static_cast<std::size_t>(i)];
  const Weight w = weight(f, q, cfg);
  return ScheduleResult{std::move(f), w, PolicyTag::NaiveLQF};
}

// Service realization for a policy's schedule. Full-duplex policies deliver
// the concurrent-probing rates; the half-duplex baseline probes its m users
// in the first m mini-slots and transmits in the remaining K - m only, so
// every scheduled user receives exactly K - m regardless of groups.
inline std::vector<int> realized_rates(const ScheduleResult& r,
                                       const SystemConfig& cfg) {
  if (r.policy != PolicyTag::HalfDuplexMW) return rate_vector(r.schedule, cfg);
  validate_schedule(r.schedule, cfg);
  int m = 0;
  for (UserId u : r.schedule.slots)
    if (u != kDummyUser) ++m;
  std::vector<int> rates(static_cast<std::size_t>(cfg.n_users()), 0);
  for (UserId u : r.schedule.slots)
    if (u != kDummyUser)
      rates[static_cast<std::size_t>(u - 1)] = cfg.k_minislots() - m;
  return rates;
}

using PolicyFn = std::function<ScheduleResult(const QueueState&, const SystemConfig&)>;

// Canonical policy names accepted by config files and the CLI.
inline PolicyFn policy_from_name(std::string_view name) {
  if (name == "maxweight") return [](const QueueState& q, const SystemConfig& c) { return maxweight_search(q, c); };
  if (name == "greedy") return [](const QueueState& q, const SystemConfig& c) { return greedy_mgg(q, c); };
  if (name == "halfduplex") return [](const QueueState& q, const SystemConfig& c) { return halfduplex_maxweight(q, c); };
  if (name == "lqf") return [](const QueueState& q, const SystemConfig& c) { return naive_lqf(q, c); };
  if (name == "brute-full") return [](const QueueState& q, const SystemConfig& c) {
    return brute_force_maxweight(q, c, BruteForceMode::FullVectors);
  };
  if (name == "brute-subsets") return [](const QueueState& q, const SystemConfig& c) {
    return brute_force_maxweight(q, c, BruteForceMode::SubsetPermutations);
  };
  throw InvalidInputError("unknown policy '" + std::string(name) + "'");
}

}  // namespace fdsched
