#include <cmath>
#include <random>

#include <doctest.h>

#include "dpc/fixed_order.hpp"
#include "dpc/instance.hpp"

using namespace dpc;

namespace {

ProblemInstance make_instance(std::vector<CVec> channels,
                              std::vector<double> targets) {
  ProblemInstance inst;
  inst.num_users = static_cast<int>(channels.size());
  inst.num_tx_antennas = static_cast<int>(channels[0].size());
  inst.channels = std::move(channels);
  inst.rate_targets = std::move(targets);
  inst.validate();
  return inst;
}

CVec cv(std::initializer_list<Cplx> vals) {
  CVec v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (auto c : vals) v(i++) = c;
  return v;
}

std::vector<double> random_powers(std::mt19937_64& eng, int m, double scale) {
  std::vector<double> p(m);
  for (auto& v : p)
    v = scale * static_cast<double>(eng() >> 11) * 0x1p-53;
  return p;
}

}  // namespace

TEST_CASE("rayleigh sampling is deterministic and well shaped") {
  const auto a = sample_rayleigh_instance(3, 3, 2.0, 42);
  const auto b = sample_rayleigh_instance(3, 3, 2.0, 42);
  REQUIRE(a.num_users == 3);
  REQUIRE(a.num_tx_antennas == 3);
  for (int m = 0; m < 3; ++m) {
    CHECK(a.rate_targets[m] == 2.0);
    CHECK(a.channels[m] == b.channels[m]);
  }

  const auto one = sample_rayleigh_instance(1, 1, 1.0, 7);
  CHECK(one.channels.size() == 1);
  CHECK(one.channels[0].size() == 1);
  CHECK(one.rate_targets == std::vector<double>{1.0});

  CHECK_THROWS_AS(sample_rayleigh_instance(0, 1, 1.0, 1),
                  std::invalid_argument);
}

TEST_CASE("sampled entries have unit variance") {
  // 10^5 entries, mean |h|^2 within [0.99, 1.01]
  double acc = 0.0;
  long count = 0;
  for (int s = 0; s < 100; ++s) {
    const auto inst = sample_rayleigh_instance(10, 100, 1.0, 1000 + s);
    for (const auto& h : inst.channels) {
      acc += h.squaredNorm();
      count += h.size();
    }
  }
  const double mean = acc / static_cast<double>(count);
  CHECK(mean > 0.99);
  CHECK(mean < 1.01);
}

TEST_CASE("rate/SINR map") {
  CHECK(rate_from_sinr(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rate_from_sinr(0.0) == 0.0);
  CHECK(sinr_from_rate(3.0) == doctest::Approx(7.0).epsilon(1e-15));
  for (double r = 0.0; r <= 60.0; r += 0.7) {
    CHECK(rate_from_sinr(sinr_from_rate(r)) == doctest::Approx(r).epsilon(1e-12));
  }
}

TEST_CASE("effective gain") {
  const CMat eye2 = CMat::Identity(2, 2);
  CHECK(effective_gain(cv({1.0, 0.0}), eye2) == doctest::Approx(1.0));
  CHECK(effective_gain(cv({1.0, 0.0}), 2.0 * eye2) == doctest::Approx(0.5));

  // explicit-inverse oracle on a random 3-vector
  std::mt19937_64 eng(5);
  std::normal_distribution<double> gauss;
  CVec h(3);
  for (int i = 0; i < 3; ++i) h(i) = Cplx(gauss(eng), gauss(eng));
  const CMat z = CMat::Identity(3, 3) + h * h.adjoint();
  const double direct = h.dot(z.inverse() * h).real();
  CHECK(effective_gain(h, z) == doctest::Approx(direct).epsilon(1e-12));

  CHECK_THROWS_AS(effective_gain(cv({1.0, 0.0}), -1.0 * eye2),
                  std::runtime_error);
}

TEST_CASE("mac_rates basics") {
  const auto inst = sample_rayleigh_instance(3, 3, 1.0, 9);
  const auto order = PrecodingOrder::identity(3);

  const auto zero = mac_rates(inst, order, PowerAllocation::from({0, 0, 0}));
  for (double r : zero) CHECK(r == 0.0);

  const auto single = make_instance({cv({1.0})}, {1.0});
  const auto r1 = mac_rates(single, PrecodingOrder::identity(1),
                            PowerAllocation::from({1.0}));
  CHECK(r1[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("determinant-lemma identity and sum-rate order invariance") {
  std::mt19937_64 eng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = sample_rayleigh_instance(3, 3, 1.0, 5000 + trial);
    const auto p = PowerAllocation::from(random_powers(eng, 3, 10.0));

    PrecodingOrder order = PrecodingOrder::identity(3);
    double sum_rate_ref = -1.0;
    do {
      std::vector<double> q(3);
      for (int m = 0; m < 3; ++m) q[m] = p.powers[order.perm[m]];
      const auto chain = interference_chain(inst, order, q);
      const auto rates = mac_rates(inst, order, p);

      double total = 0.0;
      for (int m = 0; m < 3; ++m) {
        const int user = order.perm[m];
        const double gain = effective_gain(inst.channels[user], chain[m + 1]);
        const double expected = std::log2(1.0 + p.powers[user] * gain);
        CHECK(rates[user] ==
              doctest::Approx(expected).epsilon(1e-10));
        total += rates[user];
      }
      CHECK(total == doctest::Approx(log2_det_hermitian(chain[0])).epsilon(1e-10));
      if (sum_rate_ref < 0.0)
        sum_rate_ref = total;
      else
        CHECK(total == doctest::Approx(sum_rate_ref).epsilon(1e-10));
    } while (std::next_permutation(order.perm.begin(), order.perm.end()));
  }
}

TEST_CASE("capacity region check") {
  const auto single = make_instance({cv({1.0})}, {1.0});
  CHECK(capacity_region_check(single, PowerAllocation::from({1.0}), {1.0}, 1e-9)
            .feasible);
  CHECK(capacity_region_check(single, PowerAllocation::from({0.9}), {1.0}, 1e-9)
            .violated_subset == std::vector<int>{0});

  const auto zero3 = sample_rayleigh_instance(3, 2, 0.0, 3);
  CHECK(capacity_region_check(zero3, PowerAllocation::from({0, 0, 0}),
                              {0, 0, 0}, 1e-12)
            .feasible);
}

TEST_CASE("fixed-order solutions sit on the region with nested tight subsets") {
  const auto inst = sample_rayleigh_instance(3, 3, 1.3, 2024);
  PrecodingOrder order{{2, 0, 1}};
  const auto sol = solve_fixed_order(inst, order);
  CHECK(capacity_region_check(inst, sol.powers, inst.rate_targets, 1e-9)
            .feasible);

  // exactly the nested subsets {perm[2]}, {perm[1],perm[2]}, {all} are tight
  for (std::uint32_t mask = 1; mask < 8; ++mask) {
    CMat z = CMat::Identity(3, 3);
    double target_sum = 0.0;
    for (int m = 0; m < 3; ++m)
      if (mask & (1u << m)) {
        z += sol.powers.powers[m] *
             (inst.channels[m] * inst.channels[m].adjoint());
        target_sum += inst.rate_targets[m];
      }
    const double slack = log2_det_hermitian(z) - target_sum;
    const bool nested = mask == (1u << order.perm[2]) ||
                        mask == ((1u << order.perm[2]) | (1u << order.perm[1])) ||
                        mask == 7;
    if (nested)
      CHECK(std::abs(slack) < 1e-9);
    else
      CHECK(slack > 1e-6);
  }
}

TEST_CASE("every decoding-order vertex lies inside the region") {
  std::mt19937_64 eng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = sample_rayleigh_instance(4, 2, 1.0, 900 + trial);
    const auto p = PowerAllocation::from(random_powers(eng, 4, 5.0));
    PrecodingOrder order = PrecodingOrder::identity(4);
    do {
      const auto rates = mac_rates(inst, order, p);
      CHECK(capacity_region_check(inst, p, rates, 1e-8).feasible);
    } while (std::next_permutation(order.perm.begin(), order.perm.end()));
  }
}

TEST_CASE("instance validation rejects bad data") {
  ProblemInstance inst;
  inst.num_users = 1;
  inst.num_tx_antennas = 1;
  inst.channels = {cv({0.0})};
  inst.rate_targets = {1.0};
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
  inst.channels = {cv({1.0})};
  inst.rate_targets = {-1.0};
  CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
}
