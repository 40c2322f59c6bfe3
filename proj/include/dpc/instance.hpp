#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace dpc {

using Cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// A MISO downlink instance: M single-antenna users, nT transmit antennas,
// unit noise variance at every receiver.  Rate targets are in bits per
// channel use.
struct ProblemInstance {
  int num_users = 0;
  int num_tx_antennas = 0;
  std::vector<CVec> channels;
  std::vector<double> rate_targets;

  // Throws std::invalid_argument on malformed data (non-finite entries,
  // zero channels, negative targets, inconsistent shapes).
  void validate() const;
};

// Encoding/decoding order.  perm[m] is the user occupying order position m
// (0-based).  Convention used by every formula in this library:
//   - downlink (BC): the user at the LAST position is DPC-encoded first;
//   - dual uplink (MAC): the user at position 0 is SIC-decoded first.
// The two correspond under uplink-downlink duality.
struct PrecodingOrder {
  std::vector<int> perm;

  static PrecodingOrder identity(int num_users);
  bool is_valid_for(int num_users) const;
};

// Nonnegative dual-uplink powers, linear scale, indexed by user.
struct PowerAllocation {
  std::vector<double> powers;
  double sum_power = 0.0;

  static PowerAllocation from(std::vector<double> powers);
};

// Unit-norm downlink beamformers and per-user downlink powers.
struct BeamformerSet {
  std::vector<CVec> beamformers;
  std::vector<double> downlink_powers;
};

// R = log2(1 + gamma) and its inverse.
double rate_from_sinr(double sinr);
double sinr_from_rate(double rate);

// i.i.d. Rayleigh instance: each channel entry has independent real and
// imaginary parts ~ N(0, 1/2); all users share the same rate target.
// Bit-identical output for identical (M, nT, rate_target, seed).
ProblemInstance sample_rayleigh_instance(int num_users, int num_tx_antennas,
                                         double rate_target,
                                         std::uint64_t seed);

// h^H Z^{-1} h via a Cholesky solve (no explicit inverse).  Throws
// std::runtime_error if Z is not numerically positive definite.
double effective_gain(const CVec& h, const CMat& z);

// log2 |Z| for Hermitian positive definite Z, via Cholesky.
double log2_det_hermitian(const CMat& z);

// Interference matrix chain for a given order and position-indexed powers
// q (q[m] is the power of user perm[m]).  Returns M+1 matrices with
// chain[k] = I + sum_{i=k}^{M-1} q[i] h_{perm[i]} h_{perm[i]}^H,
// so chain[M] = I and chain[0] covers all users.
std::vector<CMat> interference_chain(const ProblemInstance& inst,
                                     const PrecodingOrder& order,
                                     const std::vector<double>& position_powers);

// SIC rates of the dual MAC under the given decoding order, reported in
// user index order: rates[perm[m]] = log2(|chain[m]| / |chain[m+1]|).
std::vector<double> mac_rates(const ProblemInstance& inst,
                              const PrecodingOrder& order,
                              const PowerAllocation& p);

struct RegionCheck {
  bool feasible = false;
  std::vector<int> violated_subset;  // empty when feasible
};

// Checks log2|I + sum_{m in S} p_m h_m h_m^H| >= sum_{m in S} targets_m - tol
// for every nonempty subset S.  Requires M <= 20.
RegionCheck capacity_region_check(const ProblemInstance& inst,
                                  const PowerAllocation& p,
                                  const std::vector<double>& targets,
                                  double tol);

}  // namespace dpc
