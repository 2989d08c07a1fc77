#pragma once

#include <vector>

#include "fdsched/types.hpp"

namespace fdsched {

// Throws InvalidScheduleError unless f has exactly K slots, every entry is 0
// or a valid user id, and no real user appears twice.
inline void validate_schedule(const Schedule& f, const SystemConfig& cfg) {
  const int n = cfg.n_users();
  if (static_cast<int>(f.slots.size()) != cfg.k_minislots())
    throw InvalidScheduleError("schedule has " +
                               std::to_string(f.slots.size()) + " slots, expected " +
                               std::to_string(cfg.k_minislots()));
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  for (UserId u : f.slots) {
    if (u == kDummyUser) continue;
    if (u < 1 || u > n)
      throw InvalidScheduleError("user id " + std::to_string(u) +
                                 " outside 1.." + std::to_string(n));
    if (seen[static_cast<std::size_t>(u)])
      throw InvalidScheduleError("user " + std::to_string(u) +
                                 " scheduled twice");
    seen[static_cast<std::size_t>(u)] = 1;
  }
}

inline void check_dims(const QueueState& q, const SystemConfig& cfg) {
  if (q.size() != cfg.n_users())
    throw InvalidInputError("queue vector has " + std::to_string(q.size()) +
                            " entries for " + std::to_string(cfg.n_users()) +
                            " users");
}

// Per-user downlink rates under f, indexed by user id - 1. The user probing
// in mini-slot i receives one packet in every later mini-slot whose probing
// user belongs to a different group; dummy slots count as a different group
// for every real user. Unscheduled users receive 0.
inline std::vector<int> rate_vector(const Schedule& f, const SystemConfig& cfg) {
  validate_schedule(f, cfg);
  const int k = cfg.k_minislots();
  std::vector<int> rates(static_cast<std::size_t>(cfg.n_users()), 0);
  for (int i = 0; i < k; ++i) {
    const UserId u = f.slots[static_cast<std::size_t>(i)];
    if (u == kDummyUser) continue;
    const GroupId g = cfg.group_of(u);
    int r = 0;
    for (int j = i + 1; j < k; ++j) {
      const UserId v = f.slots[static_cast<std::size_t>(j)];
      if (v == kDummyUser || cfg.group_of(v) != g) ++r;
    }
    rates[static_cast<std::size_t>(u - 1)] = r;
  }
  return rates;
}

// MaxWeight objective w(f) = sum_u Q_u * R_u^f.
inline Weight weight(const Schedule& f, const QueueState& q,
                     const SystemConfig& cfg) {
  check_dims(q, cfg);
  const std::vector<int> rates = rate_vector(f, cfg);
  Weight w = 0;
  for (std::size_t i = 0; i < rates.size(); ++i)
    w += q.values()[i] * rates[i];
  return w;
}

// Signed weight delta of placing `candidate` in mini-slot j (1-based) after
// the first j-1 entries of `prefix`, assuming no users are scheduled later:
// the candidate gains Q_u * (K - j) and removes one unit of rate from every
// already-placed user of its own group.
inline Weight marginal_gain(const Schedule& prefix, int j, UserId candidate,
                            const QueueState& q, const SystemConfig& cfg) {
  check_dims(q, cfg);
  const int k = cfg.k_minislots();
  if (static_cast<int>(prefix.slots.size()) != k)
    throw InvalidInputError("prefix schedule has wrong length");
  if (j < 1 || j > k)
    throw InvalidInputError("slot index " + std::to_string(j) +
                            " outside 1.." + std::to_string(k));
  if (candidate < 1 || candidate > cfg.n_users())
    throw InvalidInputError("candidate id " + std::to_string(candidate) +
                            " outside 1.." + std::to_string(cfg.n_users()));
  const GroupId g = cfg.group_of(candidate);
  Weight blocked = 0;
  for (int i = 0; i < j - 1; ++i) {
    const UserId u = prefix.slots[static_cast<std::size_t>(i)];
    if (u == kDummyUser) continue;
    if (u == candidate)
      throw InvalidInputError("candidate " + std::to_string(candidate) +
                              " already scheduled");
    if (cfg.group_of(u) == g) blocked += q.of(u);
  }
  return q.of(candidate) * static_cast<Weight>(k - j) - blocked;
}

}  // namespace fdsched
