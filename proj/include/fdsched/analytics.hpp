#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "fdsched/types.hpp"

namespace fdsched {

// Capacity formulas are evaluated in exact rational arithmetic; conversion to
// floating point happens only at output boundaries, so branch-boundary
// equalities can be tested exactly.
using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Total rate of any schedule that probes the selected users in the leading
// sum(m) slots (any order) and idles afterwards: one packet per cross-group
// ordered pair plus sum(m) packets in each of the K - sum(m) trailing slots.
inline std::int64_t sum_rate(const UserSelection& m, const SystemConfig& cfg) {
  if (static_cast<int>(m.counts.size()) != cfg.n_groups())
    throw InvalidInputError("selection has " + std::to_string(m.counts.size()) +
                            " entries for " + std::to_string(cfg.n_groups()) +
                            " groups");
  std::int64_t total = 0;
  std::int64_t sum_sq = 0;
  for (int g = 1; g <= cfg.n_groups(); ++g) {
    const std::int64_t c = m.counts[static_cast<std::size_t>(g - 1)];
    if (c < 0 || c > cfg.group_size(g))
      throw InvalidInputError("selection count " + std::to_string(c) +
                              " infeasible for group " + std::to_string(g) +
                              " of size " + std::to_string(cfg.group_size(g)));
    total += c;
    sum_sq += c * c;
  }
  const std::int64_t k = cfg.k_minislots();
  if (total > k)
    throw InvalidInputError("selection probes " + std::to_string(total) +
                            " users in " + std::to_string(k) + " mini-slots");
  return (total * total - sum_sq) / 2 + (k - total) * total;
}

// Half-duplex counterpart: probing and transmission do not overlap, so the
// cross-group pair term vanishes.
inline std::int64_t halfduplex_sum_rate(const UserSelection& m,
                                        const SystemConfig& cfg) {
  sum_rate(m, cfg);  // feasibility checks only
  std::int64_t total = 0;
  for (std::int64_t c : m.counts) total += c;
  return (cfg.k_minislots() - total) * total;
}

namespace detail {

// Piecewise capacity magnitudes along the all-ones arrival direction, in
// packets per slot per user, taking rational N and K so that gain curves can
// be evaluated from the ratio alpha = K/N alone (normalized N = 1).
inline Rational hd_capacity_r(const Rational& n, const Rational& k) {
  if (n >= k / 2) return k * k / (4 * n);
  return k - n;
}

inline Rational fd_capacity_r(const Rational& n, const Rational& k,
                              std::int64_t n_groups) {
  const std::int64_t i = n_groups;
  if (n * (i + 1) >= i * k) return i * k * k / (2 * n * (i + 1));
  return (2 * i * k - n - i * n) / Rational(2 * i);
}

}  // namespace detail

// Largest per-user arrival rate (packets/slot) stabilizable under half-duplex.
inline Rational hd_capacity(std::int64_t n_users, std::int64_t k_minislots) {
  if (n_users < 1 || k_minislots < 1)
    throw InvalidInputError("hd_capacity requires N >= 1 and K >= 1");
  return detail::hd_capacity_r(Rational(n_users), Rational(k_minislots));
}

// Full-duplex counterpart. The closed form assumes equal group sizes N/I;
// callers with unequal groups should treat it as advisory (see
// capacity_point's equal_group_sizes flag).
inline Rational fd_capacity(std::int64_t n_users, std::int64_t k_minislots,
                            std::int64_t n_groups) {
  if (n_users < 1 || k_minislots < 1 || n_groups < 1)
    throw InvalidInputError("fd_capacity requires N, K, I >= 1");
  return detail::fd_capacity_r(Rational(n_users), Rational(k_minislots),
                               n_groups);
}

// Upper bound B_FD on the full-duplex sum rate (packets/slot over all users)
// under the equal-group-size relaxation m_i <= N/I.
inline Rational fd_sumrate_bound(std::int64_t n_users, std::int64_t k_minislots,
                                 std::int64_t n_groups) {
  return fd_capacity(n_users, k_minislots, n_groups) * n_users;
}

enum class GainBranch {
  ManyUsers,  // alpha <= (I+1)/I: probing dominates the slot
  Moderate,   // (I+1)/I <= alpha <= 2
  FewUsers,   // alpha >= 2: probing is a vanishing fraction of the slot
};

inline const char* to_string(GainBranch b) {
  switch (b) {
    case GainBranch::ManyUsers: return "many-users";
    case GainBranch::Moderate: return "moderate";
    case GainBranch::FewUsers: return "few-users";
  }
  return "?";
}

struct GainParams {
  Rational alpha;  // K/N
  std::int64_t n_groups = 1;
};

struct CapacityPoint {
  Rational nu_hd;
  Rational nu_fd;
  Rational gain;  // nu_fd / nu_hd
  GainBranch branch;
  // False when the inputs violate the equal-group-size assumption behind the
  // closed forms (N not divisible by I); the values are then advisory.
  bool equal_group_sizes = true;
};

// Full-duplex gain G = nu_fd / nu_hd as a piecewise-rational function of
// alpha = K/N and the group count. Magnitudes are reported normalized to one
// user (N = 1, K = alpha).
inline CapacityPoint fd_gain(const GainParams& p) {
  const std::int64_t i = p.n_groups;
  if (p.alpha <= 0 || i < 1)
    throw InvalidInputError("fd_gain requires alpha > 0 and I >= 1");
  const Rational one(1);
  CapacityPoint out;
  out.nu_hd = detail::hd_capacity_r(one, p.alpha);
  out.nu_fd = detail::fd_capacity_r(one, p.alpha, i);
  if (p.alpha <= Rational(i + 1, i)) {
    out.branch = GainBranch::ManyUsers;
    out.gain = Rational(2 * i, i + 1);
  } else if (p.alpha <= 2) {
    out.branch = GainBranch::Moderate;
    out.gain = 2 * (2 * i * p.alpha - 1 - i) / (i * p.alpha * p.alpha);
  } else {
    out.branch = GainBranch::FewUsers;
    out.gain = 1 + Rational(i - 1) / (2 * i * (p.alpha - 1));
  }
  return out;
}

// Capacity magnitudes and gain for a concrete (N, K, I).
inline CapacityPoint capacity_point(std::int64_t n_users,
                                    std::int64_t k_minislots,
                                    std::int64_t n_groups) {
  CapacityPoint out =
      fd_gain(GainParams{Rational(k_minislots, n_users), n_groups});
  out.nu_hd = hd_capacity(n_users, k_minislots);
  out.nu_fd = fd_capacity(n_users, k_minislots, n_groups);
  out.equal_group_sizes = (n_users % n_groups) == 0;
  return out;
}

// Integer-constrained maximizer of the full-duplex sum rate subject to
// m_i <= floor(N/I) and sum(m) <= K, by exhaustive enumeration. Bounds the
// error the continuous relaxation makes on integer instances.
inline std::pair<UserSelection, std::int64_t> verify_sumrate_optimum(
    std::int64_t n_users, std::int64_t k_minislots, std::int64_t n_groups) {
  if (n_users < 1 || k_minislots < 1 || n_groups < 1)
    throw InvalidInputError("verify_sumrate_optimum requires N, K, I >= 1");
  const std::int64_t cap = n_users / n_groups;
  const double space = static_cast<double>(n_groups) *
                       std::log(static_cast<double>(cap) + 1.0);
  if (space > std::log(1e7))
    throw InstanceTooLargeError(
        "selection search space exceeds 1e7 points");

  const std::int64_t k = k_minislots;
  std::vector<int> m(static_cast<std::size_t>(n_groups), 0);
  std::vector<int> best_m = m;
  std::int64_t best_v = 0;

  auto value_of = [&]() {
    std::int64_t total = 0, sum_sq = 0;
    for (int c : m) {
      total += c;
      sum_sq += static_cast<std::int64_t>(c) * c;
    }
    return (total * total - sum_sq) / 2 + (k - total) * total;
  };
  auto visit = [&](auto&& self, std::size_t g, std::int64_t sum) -> void {
    if (g == m.size()) {
      const std::int64_t v = value_of();
      if (v > best_v) {
        best_v = v;
        best_m = m;
      }
      return;
    }
    const std::int64_t lim = std::min<std::int64_t>(cap, k - sum);
    for (std::int64_t c = 0; c <= lim; ++c) {
      m[g] = static_cast<int>(c);
      self(self, g + 1, sum + c);
    }
    m[g] = 0;
  };
  visit(visit, 0, 0);
  return {UserSelection{std::move(best_m)}, best_v};
}

}  // namespace fdsched
