#pragma once

#include "dpc/instance.hpp"

namespace dpc {

struct DownlinkSolution {
  BeamformerSet beams;
  PrecodingOrder order;
  std::vector<double> achieved_sinrs;  // indexed by user, recomputed from scratch
};

// Converts a dual-MAC solution (order + powers meeting the rate targets)
// into downlink beamformers and powers achieving the same per-user SINRs
// with the same sum power.  Beamformers are the normalized interference-
// whitened matched filters Z_{m+1}^{-1} h; downlink powers come from the
// triangular SINR-duality system with unit noise.
DownlinkSolution mac_to_bc(const ProblemInstance& inst,
                           const PrecodingOrder& order,
                           const PowerAllocation& p);

// Downlink SINRs under DPC: user at order position m sees interference only
// from positions n < m (users encoded later).
std::vector<double> bc_sinr(const ProblemInstance& inst,
                            const PrecodingOrder& order,
                            const BeamformerSet& beams);

}  // namespace dpc
