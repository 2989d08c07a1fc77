#include <catch2/catch_amalgamated.hpp>

#include "fdsched/analytics.hpp"
#include "fdsched/model.hpp"
#include "oracles.hpp"

using namespace fdsched;

TEST_CASE("sum_rate counts cross-group pairs plus the trailing window") {
  const SystemConfig cfg = SystemConfig::from_group_sizes(4, {2, 1, 1});
  CHECK(sum_rate(UserSelection{{2, 1, 1}}, cfg) == 5);
  CHECK(sum_rate(UserSelection{{0, 0, 0}}, cfg) == 0);

  const SystemConfig two = SystemConfig::from_group_sizes(4, {1, 1});
  CHECK(sum_rate(UserSelection{{1, 1}}, two) == 5);
  CHECK(halfduplex_sum_rate(UserSelection{{1, 1}}, two) == 4);
}

TEST_CASE("sum_rate rejects infeasible selections") {
  const SystemConfig cfg = SystemConfig::from_group_sizes(4, {2, 1});
  CHECK_THROWS_AS(sum_rate(UserSelection{{3, 0}}, cfg), InvalidInputError);
  CHECK_THROWS_AS(sum_rate(UserSelection{{2, 1, 0}}, cfg), InvalidInputError);
  CHECK_THROWS_AS(sum_rate(UserSelection{{-1, 1}}, cfg), InvalidInputError);
  const SystemConfig tight = SystemConfig::from_group_sizes(2, {2, 2});
  CHECK_THROWS_AS(sum_rate(UserSelection{{2, 2}}, tight), InvalidInputError);
}

TEST_CASE("sum_rate equals the realized total rate for any leading order") {
  oracles::InstanceGen gen(0x5011);
  for (int it = 0; it < 200; ++it) {
    const SystemConfig cfg = gen.config(8, 8, 4);
    // random feasible selection
    std::vector<int> counts(static_cast<std::size_t>(cfg.n_groups()), 0);
    std::vector<UserId> users;
    for (GroupId g = 1; g <= cfg.n_groups(); ++g) {
      auto members = cfg.members(g);
      std::shuffle(members.begin(), members.end(), gen.rng());
      const int m_g = static_cast<int>(
          gen.uniform(0, static_cast<std::int64_t>(members.size())));
      counts[static_cast<std::size_t>(g - 1)] = m_g;
      users.insert(users.end(), members.begin(), members.begin() + m_g);
    }
    if (static_cast<int>(users.size()) > cfg.k_minislots()) continue;
    std::shuffle(users.begin(), users.end(), gen.rng());

    Schedule f = Schedule::all_dummy(cfg.k_minislots());
    for (std::size_t i = 0; i < users.size(); ++i) f.slots[i] = users[i];
    const std::vector<int> rates = rate_vector(f, cfg);
    std::int64_t total = 0;
    for (int r : rates) total += r;
    CHECK(total == sum_rate(UserSelection{counts}, cfg));
  }
}

TEST_CASE("half-duplex capacity branches") {
  CHECK(hd_capacity(20, 15) == Rational(225, 80));
  CHECK(hd_capacity(4, 15) == Rational(11));
  // branch boundary N = K/2: both expressions give K/2
  CHECK(hd_capacity(5, 10) == Rational(5));
  CHECK_THROWS_AS(hd_capacity(0, 5), InvalidInputError);
}

TEST_CASE("full-duplex capacity branches") {
  CHECK(fd_capacity(20, 15, 4) == Rational(9, 2));
  CHECK(fd_capacity(4, 15, 4) == Rational(25, 2));
  // single group forbids concurrency gains
  for (int n = 3; n <= 12; ++n)
    for (int k = 1; k <= 3 * n; ++k)
      CHECK(fd_capacity(n, k, 1) == hd_capacity(n, k));
}

TEST_CASE("gain formula hits the reported floor at alpha = 1, I = 10") {
  const CapacityPoint p = fd_gain(GainParams{Rational(1), 10});
  CHECK(p.gain == Rational(20, 11));
  CHECK(p.branch == GainBranch::ManyUsers);
  CHECK(p.gain == p.nu_fd / p.nu_hd);
}

TEST_CASE("gain tends to one as alpha grows and equals one for I = 1") {
  const CapacityPoint far = fd_gain(GainParams{Rational(1000000), 10});
  CHECK(far.gain > 1);
  CHECK(to_double(far.gain) - 1.0 < 1e-5);
  for (int k = 2; k <= 40; ++k) {
    const CapacityPoint p = fd_gain(GainParams{Rational(k, 1), 1});
    if (Rational(k, 1) >= 2) CHECK(p.gain == Rational(1));
  }
}

TEST_CASE("gain branches join continuously") {
  for (std::int64_t i = 1; i <= 100; ++i) {
    const Rational b1(i + 1, i);
    // evaluate both branch formulas at the boundary
    const Rational many(2 * i, i + 1);
    const Rational moderate =
        2 * (2 * i * b1 - 1 - i) / (i * b1 * b1);
    CHECK(many == moderate);

    const Rational two(2);
    const Rational moderate_at_two =
        2 * (2 * i * two - 1 - i) / (i * two * two);
    const Rational few_at_two = 1 + Rational(i - 1) / (2 * i * (two - 1));
    CHECK(moderate_at_two == few_at_two);

    // boundary continuity as seen through fd_gain itself
    CHECK(fd_gain(GainParams{b1, i}).gain == many);
    CHECK(fd_gain(GainParams{two, i}).gain == few_at_two);
  }
  // spot value at the I = 10 boundary: both branches give 29/20
  CHECK(fd_gain(GainParams{Rational(2), 10}).gain == Rational(29, 20));
}

TEST_CASE("gain stays within [1, 2I/(I+1)] on a broad grid") {
  for (std::int64_t i = 1; i <= 50; ++i) {
    for (Rational a(1, 10); a <= 10; a += Rational(1, 10)) {
      const CapacityPoint p = fd_gain(GainParams{a, i});
      CHECK(p.gain >= 1);
      CHECK(p.gain <= Rational(2 * i, i + 1));
      CHECK(p.gain == p.nu_fd / p.nu_hd);
    }
  }
}

TEST_CASE("capacity_point flags unequal group sizes") {
  CHECK(capacity_point(20, 15, 4).equal_group_sizes);
  CHECK_FALSE(capacity_point(10, 15, 4).equal_group_sizes);
  const CapacityPoint p = capacity_point(4, 15, 4);
  CHECK(p.nu_fd == Rational(25, 2));
  CHECK(p.nu_hd == Rational(11));
  CHECK(p.branch == GainBranch::FewUsers);
}

TEST_CASE("integer selection optimum: one user per group at K = 4") {
  const auto [m, value] = verify_sumrate_optimum(6, 4, 3);
  CHECK(value == 6);
  CHECK(m == UserSelection{{1, 1, 1}});
}

TEST_CASE("integer selection optimum reduces to the scalar quadratic for I = 1") {
  for (int n = 1; n <= 10; ++n) {
    for (int k = 1; k <= 10; ++k) {
      const auto [m, value] = verify_sumrate_optimum(n, k, 1);
      std::int64_t best = 0;
      for (int c = 0; c <= std::min(n, k); ++c)
        best = std::max<std::int64_t>(best, static_cast<std::int64_t>(k - c) * c);
      CHECK(value == best);
    }
  }
}

TEST_CASE("integer selection optimum meets the continuous bound at K=15, I=4, N=20") {
  const auto [m, value] = verify_sumrate_optimum(20, 15, 4);
  CHECK(value == 90);
  CHECK(fd_sumrate_bound(20, 15, 4) == Rational(90));
  CHECK(m == UserSelection{{3, 3, 3, 3}});
}

TEST_CASE("integer selection optimum never exceeds the continuous bound") {
  for (int n = 1; n <= 12; ++n)
    for (int k = 1; k <= 10; ++k)
      for (int i = 1; i <= 4; ++i) {
        const auto [m, value] = verify_sumrate_optimum(n, k, i);
        CHECK(Rational(value) <= fd_sumrate_bound(n, k, i));
      }
}

TEST_CASE("selection enumeration rejects oversized search spaces") {
  CHECK_THROWS_AS(verify_sumrate_optimum(1000000, 50, 8), InstanceTooLargeError);
}
