#include <catch2/catch_amalgamated.hpp>

#include "fdsched/model.hpp"
#include "oracles.hpp"

using namespace fdsched;

TEST_CASE("rate_vector on the three-user worked example") {
  // f = (a, b, c, 0, 0) with g(a) = g(b) != g(c), K = 5:
  // R_a = R_b = K - 2, R_c = K - 3.
  const SystemConfig cfg(5, 2, {1, 1, 2});
  const Schedule f{{1, 2, 3, 0, 0}};
  CHECK(rate_vector(f, cfg) == std::vector<int>{3, 3, 2});
}

TEST_CASE("rate_vector of the all-dummy schedule is zero") {
  const SystemConfig cfg(4, 2, {1, 2, 1});
  CHECK(rate_vector(Schedule::all_dummy(4), cfg) == std::vector<int>{0, 0, 0});
}

TEST_CASE("rate_vector with alternating groups") {
  const SystemConfig cfg(4, 2, {1, 2, 1, 2});
  const Schedule f{{1, 2, 3, 4}};
  CHECK(rate_vector(f, cfg) == std::vector<int>{2, 1, 1, 0});
}

TEST_CASE("rate_vector rejects malformed schedules") {
  const SystemConfig cfg(3, 2, {1, 2});
  CHECK_THROWS_AS(rate_vector(Schedule{{1, 1, 0}}, cfg), InvalidScheduleError);
  CHECK_THROWS_AS(rate_vector(Schedule{{1, 3, 0}}, cfg), InvalidScheduleError);
  CHECK_THROWS_AS(rate_vector(Schedule{{1, -1, 0}}, cfg), InvalidScheduleError);
  CHECK_THROWS_AS(rate_vector(Schedule{{1, 2}}, cfg), InvalidScheduleError);
}

TEST_CASE("rate bounds and unscheduled users") {
  oracles::InstanceGen gen(0xA11CE);
  for (int it = 0; it < 300; ++it) {
    const SystemConfig cfg = gen.config(8, 8, 4);
    const Schedule f = gen.schedule(cfg);
    const std::vector<int> rates = rate_vector(f, cfg);
    CHECK(rates == oracles::rate_vector(f, cfg));
    std::vector<bool> scheduled(static_cast<std::size_t>(cfg.n_users()), false);
    for (UserId u : f.slots)
      if (u != kDummyUser) scheduled[static_cast<std::size_t>(u - 1)] = true;
    for (std::size_t i = 0; i < rates.size(); ++i) {
      CHECK(rates[i] >= 0);
      CHECK(rates[i] <= cfg.k_minislots() - 1);
      if (!scheduled[i]) CHECK(rates[i] == 0);
    }
  }
}

TEST_CASE("weight with zero queues is zero") {
  const SystemConfig cfg(4, 2, {1, 2, 1, 2});
  const QueueState q = QueueState::zeros(4);
  CHECK(weight(Schedule{{1, 2, 3, 4}}, q, cfg) == 0);
}

TEST_CASE("weight on the alternating-group example") {
  const SystemConfig cfg(4, 2, {1, 2, 1, 2});
  const QueueState q({4, 3, 2, 1});
  // rates (2, 1, 1, 0) -> 4*2 + 3*1 + 2*1 + 1*0
  CHECK(weight(Schedule{{1, 2, 3, 4}}, q, cfg) == 13);
}

TEST_CASE("weight of one unit-queue user per group is K(K-1)/2") {
  const SystemConfig cfg(4, 3, {1, 2, 3});
  const QueueState q({1, 1, 1});
  CHECK(weight(Schedule{{1, 2, 3, 0}}, q, cfg) == 6);
}

TEST_CASE("weight rejects dimension mismatches") {
  const SystemConfig cfg(4, 2, {1, 2, 1, 2});
  CHECK_THROWS_AS(weight(Schedule{{1, 2, 0, 0}}, QueueState({1, 2}), cfg),
                  InvalidInputError);
}

TEST_CASE("weight is monotone in scheduled queues") {
  oracles::InstanceGen gen(0xBEE);
  for (int it = 0; it < 200; ++it) {
    const SystemConfig cfg = gen.config(7, 7, 3);
    const Schedule f = gen.schedule(cfg);
    std::vector<QueueLen> q_raw(static_cast<std::size_t>(cfg.n_users()));
    for (auto& v : q_raw) v = gen.uniform(0, 50);
    const Weight base = weight(f, QueueState(q_raw), cfg);
    UserId scheduled = kDummyUser;
    for (UserId u : f.slots)
      if (u != kDummyUser) scheduled = u;
    if (scheduled == kDummyUser) continue;
    q_raw[static_cast<std::size_t>(scheduled - 1)] += gen.uniform(1, 20);
    CHECK(weight(f, QueueState(q_raw), cfg) >= base);
  }
}

TEST_CASE("shifting an interior dummy to the end never decreases weight") {
  oracles::InstanceGen gen(0x5E1F);
  int found = 0;
  while (found < 300) {
    const SystemConfig cfg = gen.config(7, 7, 3);
    const Schedule f = gen.schedule(cfg);
    const QueueState q = gen.queues(cfg);
    // locate a dummy with a real user somewhere after it
    const int k = cfg.k_minislots();
    int zero_at = -1;
    for (int i = 0; i < k && zero_at < 0; ++i) {
      if (f.slots[static_cast<std::size_t>(i)] != kDummyUser) continue;
      for (int j = i + 1; j < k; ++j)
        if (f.slots[static_cast<std::size_t>(j)] != kDummyUser) {
          zero_at = i;
          break;
        }
    }
    if (zero_at < 0) continue;
    ++found;
    Schedule shifted = f;
    shifted.slots.erase(shifted.slots.begin() + zero_at);
    shifted.slots.push_back(kDummyUser);
    CHECK(weight(shifted, q, cfg) >= weight(f, q, cfg));
  }
}

TEST_CASE("LQF ordering attains the maximum over all orderings") {
  oracles::InstanceGen gen(0x10F);
  for (int it = 0; it < 150; ++it) {
    const SystemConfig cfg = gen.config(6, 6, 3);
    const QueueState q = gen.queues(cfg);
    // any subset of users that fits in K slots
    std::vector<UserId> users;
    for (UserId u = 1; u <= cfg.n_users(); ++u)
      if (gen.uniform(0, 1) == 0 &&
          static_cast<int>(users.size()) < cfg.k_minislots())
        users.push_back(u);
    // LQF with ties by ascending id
    std::vector<UserId> lqf = users;
    std::stable_sort(lqf.begin(), lqf.end(), [&q](UserId a, UserId b) {
      if (q.of(a) != q.of(b)) return q.of(a) > q.of(b);
      return a < b;
    });
    Schedule f = Schedule::all_dummy(cfg.k_minislots());
    for (std::size_t i = 0; i < lqf.size(); ++i) f.slots[i] = lqf[i];
    CHECK(weight(f, q, cfg) == oracles::best_over_orderings(users, q, cfg));
  }
}

TEST_CASE("marginal gain in the first slot is Q*(K-1)") {
  const SystemConfig cfg(6, 2, {1, 2, 1});
  const QueueState q({7, 3, 2});
  const Schedule empty = Schedule::all_dummy(6);
  CHECK(marginal_gain(empty, 1, 1, q, cfg) == 7 * 5);
  CHECK(marginal_gain(empty, 1, 2, q, cfg) == 3 * 5);
}

TEST_CASE("marginal gain nets the candidate rate against same-group blocking") {
  // K = 4, prefix = (u1, ., ., .), Q_u1 = 5 in group 1.
  const SystemConfig cfg(4, 2, {1, 1, 2});
  const QueueState q({5, 2, 2});
  Schedule prefix = Schedule::all_dummy(4);
  prefix.slots[0] = 1;
  CHECK(marginal_gain(prefix, 2, 2, q, cfg) == 2 * 2 - 5);  // same group: -1
  CHECK(marginal_gain(prefix, 2, 3, q, cfg) == 2 * 2);      // cross group: +4
}

TEST_CASE("marginal gain rejects an already-scheduled candidate") {
  const SystemConfig cfg(4, 2, {1, 2});
  const QueueState q({5, 4});
  Schedule prefix = Schedule::all_dummy(4);
  prefix.slots[0] = 1;
  CHECK_THROWS_AS(marginal_gain(prefix, 2, 1, q, cfg), InvalidInputError);
  CHECK_THROWS_AS(marginal_gain(prefix, 0, 2, q, cfg), InvalidInputError);
  CHECK_THROWS_AS(marginal_gain(prefix, 5, 2, q, cfg), InvalidInputError);
}

TEST_CASE("weights telescope over left-to-right marginal gains") {
  oracles::InstanceGen gen(0x7E1E);
  for (int it = 0; it < 200; ++it) {
    const SystemConfig cfg = gen.config(7, 7, 3);
    const QueueState q = gen.queues(cfg);
    // random leading-slot schedule
    std::vector<UserId> users;
    for (UserId u = 1; u <= cfg.n_users(); ++u)
      if (gen.uniform(0, 1) == 0 &&
          static_cast<int>(users.size()) < cfg.k_minislots())
        users.push_back(u);

    Schedule prefix = Schedule::all_dummy(cfg.k_minislots());
    Weight sum = 0;
    for (std::size_t j = 0; j < users.size(); ++j) {
      sum += marginal_gain(prefix, static_cast<int>(j + 1), users[j], q, cfg);
      prefix.slots[j] = users[j];
    }
    CHECK(sum == weight(prefix, q, cfg));
  }
}

TEST_CASE("config construction validates group assignments") {
  CHECK_THROWS_AS(SystemConfig(0, 1, {}), InvalidInputError);
  CHECK_THROWS_AS(SystemConfig(3, 0, {}), InvalidInputError);
  CHECK_THROWS_AS(SystemConfig(3, 2, {1, 3}), InvalidInputError);
  CHECK_THROWS_AS(SystemConfig(3, 2, {0, 1}), InvalidInputError);
  CHECK_THROWS_AS(QueueState({1, -1}), InvalidInputError);

  const SystemConfig cfg = SystemConfig::from_group_sizes(4, {2, 0, 1});
  CHECK(cfg.n_users() == 3);
  CHECK(cfg.group_size(2) == 0);  // empty groups are allowed
  CHECK(cfg.group_of(3) == 3);
  CHECK(cfg.members(1) == std::vector<UserId>{1, 2});
}
