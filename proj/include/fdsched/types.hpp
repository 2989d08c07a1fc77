#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fdsched/errors.hpp"

namespace fdsched {

using UserId = int;    // 1..N; 0 is the dummy user (idle mini-slot)
using GroupId = int;   // 1..I; 0 is the dummy group, never assignable to real users
using QueueLen = std::int64_t;
using Weight = std::int64_t;

inline constexpr UserId kDummyUser = 0;
inline constexpr GroupId kDummyGroup = 0;

// Static problem instance: N single-antenna users partitioned into I
// interference groups, served by a base station whose time-slot is divided
// into K probing mini-slots. Group membership is fixed across slots.
class SystemConfig {
 public:
  // `group_of[u-1]` is the group of user u; values must lie in 1..n_groups.
  // An empty user set and empty groups are both allowed.
  SystemConfig(int k_minislots, int n_groups, std::vector<GroupId> group_of)
      : k_(k_minislots), n_groups_(n_groups), group_of_(std::move(group_of)) {
    if (k_ < 1) throw InvalidInputError("k_minislots must be >= 1");
    if (n_groups_ < 1) throw InvalidInputError("n_groups must be >= 1");
    members_.resize(static_cast<std::size_t>(n_groups_));
    for (std::size_t i = 0; i < group_of_.size(); ++i) {
      const GroupId g = group_of_[i];
      if (g < 1 || g > n_groups_)
        throw InvalidInputError("user " + std::to_string(i + 1) +
                                " has group " + std::to_string(g) +
                                " outside 1.." + std::to_string(n_groups_));
      members_[static_cast<std::size_t>(g - 1)].push_back(
          static_cast<UserId>(i + 1));
    }
  }

  // Users 1..sizes[0] form group 1, the next sizes[1] users group 2, ...
  static SystemConfig from_group_sizes(int k_minislots,
                                       const std::vector<int>& sizes) {
    std::vector<GroupId> assignment;
    for (std::size_t g = 0; g < sizes.size(); ++g) {
      if (sizes[g] < 0) throw InvalidInputError("negative group size");
      assignment.insert(assignment.end(), static_cast<std::size_t>(sizes[g]),
                        static_cast<GroupId>(g + 1));
    }
    return SystemConfig(k_minislots, static_cast<int>(sizes.size()),
                        std::move(assignment));
  }

  int n_users() const { return static_cast<int>(group_of_.size()); }
  int k_minislots() const { return k_; }
  int n_groups() const { return n_groups_; }

  // Precondition: 1 <= u <= n_users().
  GroupId group_of(UserId u) const {
    return group_of_[static_cast<std::size_t>(u - 1)];
  }

  // User ids of group g in ascending order. Precondition: 1 <= g <= n_groups().
  const std::vector<UserId>& members(GroupId g) const {
    return members_[static_cast<std::size_t>(g - 1)];
  }

  int group_size(GroupId g) const {
    return static_cast<int>(members_[static_cast<std::size_t>(g - 1)].size());
  }

 private:
  int k_;
  int n_groups_;
  std::vector<GroupId> group_of_;
  std::vector<std::vector<UserId>> members_;
};

// Per-user packet backlog at a slot boundary. Entries are nonnegative.
class QueueState {
 public:
  explicit QueueState(std::vector<QueueLen> q) : q_(std::move(q)) {
    for (QueueLen v : q_)
      if (v < 0) throw InvalidInputError("queue lengths must be nonnegative");
  }

  static QueueState zeros(int n_users) {
    return QueueState(std::vector<QueueLen>(static_cast<std::size_t>(n_users), 0));
  }

  int size() const { return static_cast<int>(q_.size()); }

  // Precondition: 1 <= u <= size().
  QueueLen of(UserId u) const { return q_[static_cast<std::size_t>(u - 1)]; }

  const std::vector<QueueLen>& values() const { return q_; }

  QueueLen total() const {
    return std::accumulate(q_.begin(), q_.end(), QueueLen{0});
  }

  friend bool operator==(const QueueState& a, const QueueState& b) {
    return a.q_ == b.q_;
  }

 private:
  std::vector<QueueLen> q_;
};

// Scheduling vector f = (u_1, ..., u_K): the user probing in each mini-slot,
// 0 where the base station only transmits. No real user appears twice.
struct Schedule {
  std::vector<UserId> slots;

  static Schedule all_dummy(int k_minislots) {
    return Schedule{std::vector<UserId>(static_cast<std::size_t>(k_minislots),
                                        kDummyUser)};
  }

  friend bool operator==(const Schedule& a, const Schedule& b) {
    return a.slots == b.slots;
  }
};

// Per-group selection counts m = (m_1, ..., m_I): how many users to probe
// from each group. Feasible when sum(m) <= K and m_i <= |group i|.
struct UserSelection {
  std::vector<int> counts;

  int total() const {
    return std::accumulate(counts.begin(), counts.end(), 0);
  }

  friend bool operator==(const UserSelection& a, const UserSelection& b) {
    return a.counts == b.counts;
  }
};

}  // namespace fdsched
