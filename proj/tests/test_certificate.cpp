#include <cmath>

#include <doctest.h>

#include "dpc/certificate.hpp"

using namespace dpc;

namespace {

constexpr double kLn2 = 0.6931471805599453;

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

// Finite-difference oracle: sensitivity of minimum sum power to the rate
// target of the user at each order position, in nats.
std::vector<double> fd_multipliers(const ProblemInstance& inst,
                                   const PrecodingOrder& order) {
  const double step_nats = 1e-5;
  const double step_bits = step_nats / kLn2;
  std::vector<double> lambda(inst.num_users);
  for (int m = 0; m < inst.num_users; ++m) {
    const int user = order.perm[m];
    auto up = inst;
    up.rate_targets[user] += step_bits;
    auto down = inst;
    down.rate_targets[user] -= step_bits;
    const double pu = solve_fixed_order(up, order).powers.sum_power;
    const double pd = solve_fixed_order(down, order).powers.sum_power;
    lambda[m] = (pu - pd) / (2.0 * step_nats);
  }
  return lambda;
}

// Bit-convention recursion (gains carry the log2 derivative scale).  Used
// as an oracle for the scale-covariance property.
std::vector<double> bit_convention_multipliers(const ProblemInstance& inst,
                                               const FixedOrderSolution& sol) {
  const int m = inst.num_users;
  std::vector<Eigen::LLT<CMat>> llt(m + 1);
  for (int k = 0; k <= m; ++k) llt[k].compute(sol.z_chain[k]);
  std::vector<double> lambda(m);
  for (int i = 0; i < m; ++i) {
    const CVec& h = inst.channels[sol.order.perm[i]];
    std::vector<double> quad(i + 2);
    for (int k = 0; k <= i + 1; ++k)
      quad[k] = h.dot(llt[k].solve(h)).real() / kLn2;
    double corr = 0.0;
    for (int n = 0; n < i; ++n) corr += lambda[n] * (quad[n] - quad[n + 1]);
    lambda[i] = (1.0 - corr) / quad[i];
  }
  return lambda;
}

}  // namespace

TEST_CASE("single user multiplier") {
  const auto inst = make_instance({cv({1.0})}, {1.0});
  const auto sol = solve_fixed_order(inst, PrecodingOrder::identity(1));
  const auto lambda = lagrange_multipliers(inst, sol);
  CHECK(lambda.size() == 1);
  CHECK(lambda[0] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("orthogonal channels kill the correction sum") {
  const auto inst =
      make_instance({cv({1.0, 0.0}), cv({0.0, 1.0})}, {1.0, 1.0});
  const auto sol = solve_fixed_order(inst, PrecodingOrder::identity(2));
  const auto lambda = lagrange_multipliers(inst, sol);
  CHECK(lambda[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(lambda[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(certify(lambda).verdict == Verdict::TimeSharingBoundary);
}

TEST_CASE("multipliers match finite-difference sensitivities") {
  for (int trial = 0; trial < 25; ++trial) {
    const auto inst = sample_rayleigh_instance(3, 3, 1.2, 4200 + trial);
    PrecodingOrder order{{trial % 3, (trial + 1) % 3, (trial + 2) % 3}};
    const auto sol = solve_fixed_order(inst, order);
    const auto lambda = lagrange_multipliers(inst, sol);
    const auto fd = fd_multipliers(inst, order);
    for (int m = 0; m < 3; ++m)
      CHECK(lambda[m] == doctest::Approx(fd[m]).epsilon(1e-4));
  }
}

TEST_CASE("multipliers are positive for every order") {
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = sample_rayleigh_instance(4, 3, 0.9, 6200 + trial);
    PrecodingOrder order = PrecodingOrder::identity(4);
    do {
      const auto sol = solve_fixed_order(inst, order);
      for (double l : lagrange_multipliers(inst, sol)) CHECK(l > 0.0);
    } while (std::next_permutation(order.perm.begin(), order.perm.end()));
  }
}

TEST_CASE("certify verdicts") {
  CHECK(certify({1.0, 2.0, 3.0}, 1e-8).verdict == Verdict::Optimal);
  CHECK(certify({2.0, 2.0}, 1e-8).verdict == Verdict::TimeSharingBoundary);
  CHECK(certify({3.0, 1.0}, 1e-8).verdict == Verdict::NotOptimal);
  CHECK(certify({5.0}).verdict == Verdict::Optimal);

  const auto boundary = certify({1.0, 1.0, 2.0}, 1e-8);
  CHECK(boundary.verdict == Verdict::TimeSharingBoundary);
  CHECK(boundary.tie_positions == std::vector<int>{1});
}

TEST_CASE("verdict is invariant under the rate-unit convention") {
  for (int trial = 0; trial < 15; ++trial) {
    const auto inst = sample_rayleigh_instance(3, 2, 1.1, 8800 + trial);
    const auto sol = solve_fixed_order(inst, PrecodingOrder::identity(3));
    const auto nats = lagrange_multipliers(inst, sol);
    const auto bits = bit_convention_multipliers(inst, sol);
    for (int m = 0; m < 3; ++m)
      CHECK(bits[m] == doctest::Approx(nats[m] * kLn2).epsilon(1e-12));
    CHECK(certify(nats).verdict == certify(bits).verdict);
  }
}
