#include "dpc/instance.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dpc {

namespace {

// Deterministic standard normal sampler (Box-Muller over raw mt19937_64
// output).  std::normal_distribution is not pinned by the standard, so we
// roll our own to keep sampled instances bit-identical everywhere.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : eng_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  // Uniform on (0, 1], so log() is always finite.
  double uniform_open() {
    return static_cast<double>((eng_() >> 11) + 1) * 0x1p-53;
  }

  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

void ProblemInstance::validate() const {
  if (num_users < 1 || num_tx_antennas < 1)
    throw std::invalid_argument("instance: need at least one user and one antenna");
  if (static_cast<int>(channels.size()) != num_users ||
      static_cast<int>(rate_targets.size()) != num_users)
    throw std::invalid_argument("instance: channel/target count mismatch");
  for (int m = 0; m < num_users; ++m) {
    if (channels[m].size() != num_tx_antennas)
      throw std::invalid_argument("instance: channel dimension mismatch");
    if (!channels[m].allFinite())
      throw std::invalid_argument("instance: non-finite channel entry");
    if (channels[m].norm() <= 0.0)
      throw std::invalid_argument("instance: zero channel vector");
    if (!std::isfinite(rate_targets[m]) || rate_targets[m] < 0.0)
      throw std::invalid_argument("instance: rate targets must be finite and >= 0");
  }
}

PrecodingOrder PrecodingOrder::identity(int num_users) {
  PrecodingOrder order;
  order.perm.resize(num_users);
  for (int m = 0; m < num_users; ++m) order.perm[m] = m;
  return order;
}

bool PrecodingOrder::is_valid_for(int num_users) const {
  if (static_cast<int>(perm.size()) != num_users) return false;
  std::vector<bool> seen(num_users, false);
  for (int u : perm) {
    if (u < 0 || u >= num_users || seen[u]) return false;
    seen[u] = true;
  }
  return true;
}

PowerAllocation PowerAllocation::from(std::vector<double> powers) {
  PowerAllocation p;
  p.powers = std::move(powers);
  p.sum_power = 0.0;
  for (double v : p.powers) p.sum_power += v;
  return p;
}

double rate_from_sinr(double sinr) { return std::log2(1.0 + sinr); }

double sinr_from_rate(double rate) { return std::exp2(rate) - 1.0; }

ProblemInstance sample_rayleigh_instance(int num_users, int num_tx_antennas,
                                         double rate_target,
                                         std::uint64_t seed) {
  if (num_users < 1 || num_tx_antennas < 1)
    throw std::invalid_argument("sample_rayleigh_instance: M >= 1 and nT >= 1 required");
  ProblemInstance inst;
  inst.num_users = num_users;
  inst.num_tx_antennas = num_tx_antennas;
  inst.rate_targets.assign(num_users, rate_target);
  NormalSampler gauss(seed);
  const double s = std::sqrt(0.5);
  inst.channels.resize(num_users);
  for (int m = 0; m < num_users; ++m) {
    CVec h(num_tx_antennas);
    for (int a = 0; a < num_tx_antennas; ++a) {
      const double re = s * gauss();
      const double im = s * gauss();
      h(a) = Cplx(re, im);
    }
    inst.channels[m] = h;
  }
  inst.validate();
  return inst;
}

double effective_gain(const CVec& h, const CMat& z) {
  if (z.rows() != z.cols() || z.rows() != h.size())
    throw std::invalid_argument("effective_gain: dimension mismatch");
  Eigen::LLT<CMat> llt(z);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("effective_gain: matrix not positive definite");
  const CVec x = llt.solve(h);
  return h.dot(x).real();
}

double log2_det_hermitian(const CMat& z) {
  Eigen::LLT<CMat> llt(z);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("log2_det_hermitian: matrix not positive definite");
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) acc += std::log2(l(i, i).real());
  return 2.0 * acc;
}

std::vector<CMat> interference_chain(const ProblemInstance& inst,
                                     const PrecodingOrder& order,
                                     const std::vector<double>& position_powers) {
  const int m_users = inst.num_users;
  const int nt = inst.num_tx_antennas;
  std::vector<CMat> chain(m_users + 1);
  chain[m_users] = CMat::Identity(nt, nt);
  for (int k = m_users - 1; k >= 0; --k) {
    const CVec& h = inst.channels[order.perm[k]];
    chain[k] = chain[k + 1] + position_powers[k] * (h * h.adjoint());
  }
  return chain;
}

std::vector<double> mac_rates(const ProblemInstance& inst,
                              const PrecodingOrder& order,
                              const PowerAllocation& p) {
  const int m_users = inst.num_users;
  std::vector<double> q(m_users);
  for (int m = 0; m < m_users; ++m) q[m] = p.powers[order.perm[m]];
  const auto chain = interference_chain(inst, order, q);
  std::vector<double> logdets(m_users + 1);
  for (int k = 0; k <= m_users; ++k) logdets[k] = log2_det_hermitian(chain[k]);
  std::vector<double> rates(m_users);
  for (int m = 0; m < m_users; ++m) {
    rates[order.perm[m]] = std::max(0.0, logdets[m] - logdets[m + 1]);
  }
  return rates;
}

RegionCheck capacity_region_check(const ProblemInstance& inst,
                                  const PowerAllocation& p,
                                  const std::vector<double>& targets,
                                  double tol) {
  const int m_users = inst.num_users;
  if (m_users > 20)
    throw std::invalid_argument("capacity_region_check: M <= 20 required");
  const int nt = inst.num_tx_antennas;
  for (std::uint32_t mask = 1; mask < (1u << m_users); ++mask) {
    CMat z = CMat::Identity(nt, nt);
    double target_sum = 0.0;
    for (int m = 0; m < m_users; ++m) {
      if (mask & (1u << m)) {
        const CVec& h = inst.channels[m];
        z += p.powers[m] * (h * h.adjoint());
        target_sum += targets[m];
      }
    }
    if (log2_det_hermitian(z) < target_sum - tol) {
      RegionCheck rc;
      rc.feasible = false;
      for (int m = 0; m < m_users; ++m)
        if (mask & (1u << m)) rc.violated_subset.push_back(m);
      return rc;
    }
  }
  return RegionCheck{true, {}};
}

}  // namespace dpc
