#include "dpc/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dpc {

namespace {

constexpr double kLn2 = 0.6931471805599453;

struct SortedLambda {
  PrecodingOrder order;        // users sorted by ascending multiplier
  std::vector<double> delta;   // consecutive differences, by position
};

SortedLambda sort_ascending(const std::vector<double>& lambda) {
  const int m_users = static_cast<int>(lambda.size());
  SortedLambda s;
  s.order.perm.resize(m_users);
  std::iota(s.order.perm.begin(), s.order.perm.end(), 0);
  std::stable_sort(s.order.perm.begin(), s.order.perm.end(),
                   [&](int a, int b) { return lambda[a] < lambda[b]; });
  s.delta.resize(m_users);
  double prev = 0.0;
  for (int m = 0; m < m_users; ++m) {
    const double v = lambda[s.order.perm[m]];
    s.delta[m] = v - prev;
    prev = v;
  }
  return s;
}

// Tie groups over the ascending sort: group boundaries where the gap
// between consecutive multipliers exceeds tie_tol * scale.
std::vector<std::vector<int>> tie_groups(const std::vector<double>& lambda,
                                         const PrecodingOrder& sorted,
                                         double tie_tol) {
  const int m_users = static_cast<int>(lambda.size());
  double scale = 0.0;
  for (double v : lambda) scale = std::max(scale, std::abs(v));
  scale = std::max(scale, 1e-300);
  std::vector<std::vector<int>> groups;
  for (int m = 0; m < m_users; ++m) {
    const int user = sorted.perm[m];
    if (m == 0 || lambda[user] - lambda[sorted.perm[m - 1]] > tie_tol * scale)
      groups.emplace_back();
    groups.back().push_back(user);
  }
  return groups;
}

// Orders consistent with the ascending sort where users inside a tie group
// may permute freely.  Enumeration capped; the sorted order comes first.
std::vector<PrecodingOrder> tie_consistent_orders(
    const std::vector<double>& lambda, const PrecodingOrder& sorted,
    double tie_tol, std::size_t cap = 120) {
  auto groups = tie_groups(lambda, sorted, tie_tol);
  std::vector<PrecodingOrder> out;
  out.push_back(sorted);
  // Cartesian product of within-group permutations.
  std::vector<std::vector<std::vector<int>>> group_perms;
  for (auto& g : groups) {
    std::vector<std::vector<int>> perms;
    std::vector<int> p = g;
    std::sort(p.begin(), p.end());
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()) && perms.size() <= cap);
    group_perms.push_back(std::move(perms));
  }
  std::vector<std::size_t> idx(group_perms.size(), 0);
  while (out.size() < cap) {
    // advance the mixed-radix counter
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == group_perms[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
    PrecodingOrder o;
    for (std::size_t gi = 0; gi < group_perms.size(); ++gi)
      for (int user : group_perms[gi][idx[gi]]) o.perm.push_back(user);
    if (o.perm != sorted.perm) out.push_back(std::move(o));
  }
  return out;
}

double inner_objective(const ProblemInstance& inst, const PrecodingOrder& order,
                       const std::vector<double>& delta,
                       const std::vector<double>& q) {
  const auto chain = interference_chain(inst, order, q);
  double f = 0.0;
  for (std::size_t m = 0; m < delta.size(); ++m) {
    if (delta[m] != 0.0) f += delta[m] * log2_det_hermitian(chain[m]);
    f -= q[m];
  }
  return f;
}

// KKT system polish for time-sharing optima: powers q (by position of the
// ascending order) and group-boundary multipliers theta solve
//   1 = sum_{k: m_k <= i} theta_k * (1/ln2) h_i^H Z_{m_k}^{-1} h_i   (all i)
//   log2|Z_{m_k}| = sum_{i >= m_k} target_{perm[i]}                  (all k)
struct PolishResult {
  bool ok = false;
  std::vector<double> q;      // by position
  std::vector<double> theta;  // by group boundary
};

PolishResult newton_polish(const ProblemInstance& inst,
                           const PrecodingOrder& order,
                           const std::vector<int>& boundaries,
                           std::vector<double> q, std::vector<double> theta) {
  const int m_users = inst.num_users;
  const int k_groups = static_cast<int>(boundaries.size());
  const int n = m_users + k_groups;

  for (double t : inst.rate_targets)
    if (t <= 0.0) return {};  // zero-rate users handled outside the polish

  auto residual = [&](const std::vector<double>& qv,
                      const std::vector<double>& th, Eigen::VectorXd& r,
                      Eigen::MatrixXd* jac) -> bool {
    const auto chain = interference_chain(inst, order, qv);
    std::vector<Eigen::LLT<CMat>> llt(k_groups);
    // y[k][j] = Z_{m_k}^{-1} h_{perm[j]}
    std::vector<std::vector<CVec>> y(k_groups);
    for (int k = 0; k < k_groups; ++k) {
      llt[k].compute(chain[boundaries[k]]);
      if (llt[k].info() != Eigen::Success) return false;
      y[k].resize(m_users);
      for (int j = boundaries[k]; j < m_users; ++j)
        y[k][j] = llt[k].solve(inst.channels[order.perm[j]]);
    }
    r.setZero(n);
    for (int i = 0; i < m_users; ++i) {
      const CVec& h = inst.channels[order.perm[i]];
      double acc = 0.0;
      for (int k = 0; k < k_groups; ++k)
        if (boundaries[k] <= i) acc += th[k] * h.dot(y[k][i]).real() / kLn2;
      r(i) = 1.0 - acc;
    }
    for (int k = 0; k < k_groups; ++k) {
      double target_sum = 0.0;
      for (int i = boundaries[k]; i < m_users; ++i)
        target_sum += inst.rate_targets[order.perm[i]];
      r(m_users + k) = log2_det_hermitian(chain[boundaries[k]]) - target_sum;
    }
    if (jac) {
      jac->setZero(n, n);
      for (int i = 0; i < m_users; ++i) {
        const CVec& hi = inst.channels[order.perm[i]];
        for (int j = 0; j < m_users; ++j) {
          double acc = 0.0;
          for (int k = 0; k < k_groups; ++k)
            if (boundaries[k] <= i && boundaries[k] <= j)
              acc += th[k] * std::norm(hi.dot(y[k][j])) / kLn2;
          (*jac)(i, j) = acc;
        }
        for (int k = 0; k < k_groups; ++k)
          if (boundaries[k] <= i)
            (*jac)(i, m_users + k) = -hi.dot(y[k][i]).real() / kLn2;
      }
      for (int k = 0; k < k_groups; ++k)
        for (int j = boundaries[k]; j < m_users; ++j) {
          const CVec& hj = inst.channels[order.perm[j]];
          (*jac)(m_users + k, j) = hj.dot(y[k][j]).real() / kLn2;
        }
    }
    return true;
  };

  Eigen::VectorXd r(n);
  Eigen::MatrixXd jac(n, n);
  if (!residual(q, theta, r, &jac)) return {};
  double rnorm = r.lpNorm<Eigen::Infinity>();

  for (int iter = 0; iter < 60 && rnorm > 1e-12; ++iter) {
    const Eigen::VectorXd step = jac.fullPivLu().solve(-r);
    if (!step.allFinite()) return {};
    double t = 1.0;
    bool accepted = false;
    while (t > 1e-6) {
      std::vector<double> qn = q, thn = theta;
      for (int i = 0; i < m_users; ++i)
        qn[i] = std::max(0.0, q[i] + t * step(i));
      for (int k = 0; k < k_groups; ++k) thn[k] = theta[k] + t * step(m_users + k);
      Eigen::VectorXd rn(n);
      if (residual(qn, thn, rn, nullptr) &&
          rn.lpNorm<Eigen::Infinity>() < rnorm * (1.0 - 1e-4 * t) + 1e-15) {
        q = std::move(qn);
        theta = std::move(thn);
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    if (!residual(q, theta, r, &jac)) return {};
    rnorm = r.lpNorm<Eigen::Infinity>();
  }

  if (rnorm > 1e-10) return {};
  for (double th : theta)
    if (th <= 0.0) return {};  // wrong group structure
  PolishResult res;
  res.ok = true;
  res.q = std::move(q);
  res.theta = std::move(theta);
  return res;
}

}  // namespace

std::vector<double> lambda_upper_bound(const ProblemInstance& inst) {
  double total = 0.0;
  for (double t : inst.rate_targets) total += t;
  const double budget = std::exp2(total);
  std::vector<double> bound(inst.num_users);
  for (int m = 0; m < inst.num_users; ++m)
    bound[m] = kLn2 * budget / inst.channels[m].squaredNorm();
  return bound;
}

std::vector<double> rate_subgradient(const std::vector<double>& rates,
                                     const std::vector<double>& targets) {
  std::vector<double> nu(rates.size());
  for (std::size_t m = 0; m < rates.size(); ++m) nu[m] = rates[m] - targets[m];
  return nu;
}

InnerResult dual_inner_maximize(const ProblemInstance& inst,
                                const std::vector<double>& lambda, double tol,
                                const std::vector<double>* warm_start) {
  const int m_users = inst.num_users;
  for (double v : lambda)
    if (v < 0.0)
      throw std::invalid_argument("dual_inner_maximize: lambda must be >= 0");

  SortedLambda s = sort_ascending(lambda);
  InnerResult res;
  res.order = s.order;

  std::vector<double> q(m_users, 0.0);
  if (warm_start)
    for (int m = 0; m < m_users; ++m)
      q[m] = std::max(0.0, (*warm_start)[s.order.perm[m]]);

  // gradient: grad[m] = (1/ln2) sum_{n<=m} delta_n h_m^H Z_n^{-1} h_m - 1.
  // y[k][j] = Z_k^{-1} h_{perm[j]} feeds both the gradient and the Hessian.
  auto eval_point = [&](const std::vector<double>& qv, Eigen::VectorXd& grad,
                        std::vector<std::vector<CVec>>& y) -> bool {
    const auto chain = interference_chain(inst, s.order, qv);
    for (int k = 0; k < m_users; ++k) {
      Eigen::LLT<CMat> llt(chain[k]);
      if (llt.info() != Eigen::Success) return false;
      for (int j = k; j < m_users; ++j)
        y[k][j] = llt.solve(inst.channels[s.order.perm[j]]);
    }
    for (int m = 0; m < m_users; ++m) {
      const CVec& h = inst.channels[s.order.perm[m]];
      double acc = 0.0;
      for (int k = 0; k <= m; ++k)
        if (s.delta[k] != 0.0) acc += s.delta[k] * h.dot(y[k][m]).real();
      grad(m) = acc / kLn2 - 1.0;
    }
    return true;
  };
  auto kkt_residual = [&](const std::vector<double>& qv,
                          const Eigen::VectorXd& grad) {
    double r = 0.0;
    for (int m = 0; m < m_users; ++m)
      r = std::max(r, (qv[m] > 0.0) ? std::abs(grad(m))
                                    : std::max(grad(m), 0.0));
    return r;
  };

  Eigen::VectorXd grad(m_users);
  std::vector<std::vector<CVec>> y(m_users, std::vector<CVec>(m_users));
  if (!eval_point(q, grad, y))
    throw std::runtime_error("dual_inner_maximize: chain not positive definite");
  double residual = kkt_residual(q, grad);

  const int max_inner = 2000;
  int iter = 0;
  for (; iter < max_inner; ++iter) {
    if (residual <= tol) {
      res.converged = true;
      break;
    }

    // Armijo on the objective (used only when the residual-based Newton
    // acceptance below fails; near the optimum the objective differences
    // fall under the double-precision noise floor, so the Newton step is
    // judged by residual decrease instead).
    auto try_direction = [&](const Eigen::VectorXd& dir) {
      const double f = inner_objective(inst, s.order, s.delta, q);
      double t = 1.0;
      while (t > 1e-18) {
        std::vector<double> qn(m_users);
        double slope = 0.0;
        for (int m = 0; m < m_users; ++m) {
          qn[m] = std::max(0.0, q[m] + t * dir(m));
          slope += grad(m) * (qn[m] - q[m]);
        }
        const double fn = inner_objective(inst, s.order, s.delta, qn);
        if (slope > 0.0 && fn >= f + 1e-4 * slope) {
          q = std::move(qn);
          return true;
        }
        t *= 0.5;
      }
      return false;
    };

    // Newton step on the free coordinates (quadratic local convergence);
    // the projected gradient step is the fallback.
    bool accepted = false;
    std::vector<int> free_idx;
    for (int m = 0; m < m_users; ++m)
      if (q[m] > 0.0 || grad(m) > 0.0) free_idx.push_back(m);
    const int nf = static_cast<int>(free_idx.size());
    if (nf > 0) {
      // -Hessian restricted to the free set:
      // (-H)_{mj} = (1/ln2) sum_{k <= min(m,j)} delta_k |h_m^H Z_k^{-1} h_j|^2
      Eigen::MatrixXd neg_h(nf, nf);
      for (int a = 0; a < nf; ++a)
        for (int b = a; b < nf; ++b) {
          const int m = free_idx[a], j = free_idx[b];
          const CVec& hm = inst.channels[s.order.perm[m]];
          double acc = 0.0;
          for (int k = 0; k <= std::min(m, j); ++k)
            if (s.delta[k] != 0.0)
              acc += s.delta[k] * std::norm(hm.dot(y[k][j]));
          neg_h(a, b) = neg_h(b, a) = acc / kLn2;
        }
      Eigen::VectorXd gf(nf);
      for (int a = 0; a < nf; ++a) gf(a) = grad(free_idx[a]);
      const Eigen::LDLT<Eigen::MatrixXd> fac(neg_h);
      if (fac.info() == Eigen::Success) {
        const Eigen::VectorXd df = fac.solve(gf);
        if (df.allFinite()) {
          Eigen::VectorXd dir = Eigen::VectorXd::Zero(m_users);
          for (int a = 0; a < nf; ++a) dir(free_idx[a]) = df(a);
          // residual-based acceptance of the full projected Newton step
          std::vector<double> qn(m_users);
          for (int m = 0; m < m_users; ++m)
            qn[m] = std::max(0.0, q[m] + dir(m));
          Eigen::VectorXd grad_n(m_users);
          std::vector<std::vector<CVec>> y_n(m_users,
                                             std::vector<CVec>(m_users));
          if (eval_point(qn, grad_n, y_n)) {
            const double resid_n = kkt_residual(qn, grad_n);
            if (resid_n < residual) {
              q = std::move(qn);
              grad = std::move(grad_n);
              y = std::move(y_n);
              residual = resid_n;
              accepted = true;
              continue;
            }
          }
          accepted = try_direction(dir);
        }
      }
    }
    if (!accepted) accepted = try_direction(grad);
    if (!accepted) break;  // step collapsed; report best iterate
    if (!eval_point(q, grad, y))
      throw std::runtime_error("dual_inner_maximize: chain not positive definite");
    residual = kkt_residual(q, grad);
  }

  res.iterations = iter;
  res.residual = residual;
  res.objective = inner_objective(inst, s.order, s.delta, q);
  std::vector<double> user_powers(m_users, 0.0);
  for (int m = 0; m < m_users; ++m) user_powers[s.order.perm[m]] = q[m];
  res.powers = PowerAllocation::from(std::move(user_powers));
  res.rates = mac_rates(inst, s.order, res.powers);
  return res;
}

RelaxationSolution ellipsoid_solve(const ProblemInstance& inst,
                                   const RelaxationParams& params) {
  inst.validate();
  const int m_users = inst.num_users;
  std::vector<double> lam_max = lambda_upper_bound(inst);

  RelaxationSolution out;
  double best_dual = -std::numeric_limits<double>::infinity();
  std::vector<double> best_lambda(m_users, 0.0);
  InnerResult best_inner;
  int total_iters = 0;
  bool gap_converged = false;
  const int max_restarts = 6;

  for (int restart = 0; restart <= max_restarts; ++restart) {
    // Initial ellipsoid: centered at lam_max/2, axes sqrt(M)*lam_max/2 so
    // the whole multiplier box [0, lam_max] lies inside.
    Eigen::VectorXd x(m_users);
    Eigen::MatrixXd shape = Eigen::MatrixXd::Zero(m_users, m_users);
    for (int m = 0; m < m_users; ++m) {
      x(m) = 0.5 * lam_max[m];
      shape(m, m) = m_users * 0.25 * lam_max[m] * lam_max[m];
    }

    best_dual = -std::numeric_limits<double>::infinity();
    gap_converged = false;
    std::vector<double> warm(m_users, 0.0);
    bool have_warm = false;

    for (int iter = 0; iter < params.max_iters; ++iter) {
      ++total_iters;
      Eigen::VectorXd cut(m_users);
      bool objective_cut = true;
      int neg = -1;
      for (int m = 0; m < m_users; ++m)
        if (x(m) < 0.0 && (neg < 0 || x(m) < x(neg))) neg = m;
      if (neg >= 0) {
        cut.setZero();
        cut(neg) = -1.0;
        objective_cut = false;
      } else {
        std::vector<double> lam(x.data(), x.data() + m_users);
        InnerResult inner = dual_inner_maximize(
            inst, lam, params.inner_tol, have_warm ? &warm : nullptr);
        warm = inner.powers.powers;
        have_warm = true;
        double dual = -inner.objective;
        for (int m = 0; m < m_users; ++m) dual += lam[m] * inst.rate_targets[m];
        if (dual > best_dual) {
          best_dual = dual;
          best_lambda = lam;
          best_inner = inner;
        }
        const auto nu = rate_subgradient(inner.rates, inst.rate_targets);
        for (int m = 0; m < m_users; ++m) cut(m) = nu[m];
        const double gap = std::sqrt(
            std::max(0.0, cut.dot(shape * cut)));
        out.dual_gap_bound = gap;
        if (gap <= params.tol * (1.0 + std::abs(dual))) {
          gap_converged = true;
          break;
        }
      }

      const double denom = std::sqrt(std::max(cut.dot(shape * cut), 0.0));
      if (denom <= 0.0) {
        gap_converged = objective_cut;
        break;
      }
      if (m_users == 1) {
        x(0) -= (cut(0) > 0 ? 1.0 : -1.0) * std::sqrt(shape(0, 0)) * 0.5;
        shape(0, 0) *= 0.25;
      } else {
        const double n = static_cast<double>(m_users);
        const Eigen::VectorXd gt = shape * cut / denom;
        x -= gt / (n + 1.0);
        shape = (n * n / (n * n - 1.0)) *
                (shape - (2.0 / (n + 1.0)) * (gt * gt.transpose()));
        shape = 0.5 * (shape + shape.transpose()).eval();
      }
    }

    // Safeguard: the bound is heuristic; restart with a doubled box if the
    // optimum landed within 1% of its boundary.
    bool near_boundary = false;
    for (int m = 0; m < m_users; ++m)
      if (best_lambda[m] > 0.99 * lam_max[m]) near_boundary = true;
    if (!near_boundary || restart == max_restarts) break;
    for (double& v : lam_max) v *= 2.0;
    out.restarts = restart + 1;
  }

  out.iterations = total_iters;
  out.converged = gap_converged;
  out.dual_value = best_dual;
  for (double& v : best_lambda) v = std::max(0.0, v);
  out.multipliers = best_lambda;

  // ---- primal recovery ----
  SortedLambda s = sort_ascending(best_lambda);
  const auto candidates =
      tie_consistent_orders(best_lambda, s.order, params.tie_tol);
  FixedOrderSolution best_fo = solve_fixed_order(inst, candidates[0]);
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    FixedOrderSolution fo = solve_fixed_order(inst, candidates[k]);
    if (fo.powers.sum_power < best_fo.powers.sum_power) best_fo = std::move(fo);
  }

  const double ts_gap = best_fo.powers.sum_power - best_dual;
  const double ts_threshold =
      std::max(1e-9, 10.0 * params.tol * (1.0 + std::abs(best_dual)));
  double rate_dev = 0.0;
  for (int m = 0; m < m_users; ++m)
    rate_dev = std::max(rate_dev,
                        std::abs(best_inner.rates[m] - inst.rate_targets[m]));

  if (ts_gap <= ts_threshold || rate_dev <= params.feas_tol) {
    // A single order attains the relaxation optimum: return the closed-form
    // solution (rates exactly tight).
    out.powers = best_fo.powers;
    out.achieved_rates = best_fo.achieved_rates;
    out.sum_power = best_fo.powers.sum_power;
    return out;
  }

  // Time-sharing: polish the powers on the active nested constraints, then
  // decompose the target tuple over tie-group vertices.
  const auto groups = tie_groups(best_lambda, s.order, params.tie_tol);
  std::vector<int> boundaries;
  std::vector<double> theta;
  {
    int pos = 0;
    double prev_level = 0.0;
    for (const auto& g : groups) {
      boundaries.push_back(pos);
      const double level = best_lambda[g.front()];
      theta.push_back(std::max(level - prev_level, 1e-12));
      prev_level = level;
      pos += static_cast<int>(g.size());
    }
  }
  std::vector<double> q0(m_users);
  for (int m = 0; m < m_users; ++m)
    q0[m] = best_inner.powers.powers[s.order.perm[m]];

  PolishResult polish = newton_polish(inst, s.order, boundaries, q0, theta);
  PowerAllocation p_star = best_inner.powers;
  if (polish.ok) {
    std::vector<double> user_powers(m_users, 0.0);
    for (int m = 0; m < m_users; ++m)
      user_powers[s.order.perm[m]] = polish.q[m];
    p_star = PowerAllocation::from(std::move(user_powers));
    // multiplier levels implied by the polished theta
    double level = 0.0;
    std::size_t gi = 0;
    for (int m = 0; m < m_users; ++m) {
      if (gi < boundaries.size() && boundaries[gi] == m) level += polish.theta[gi++];
      out.multipliers[s.order.perm[m]] = level;
    }
  } else {
    out.converged = false;
  }

  out.powers = p_star;
  out.sum_power = p_star.sum_power;
  try {
    TimeSharing ts = recover_time_sharing(inst, p_star, out.multipliers,
                                          inst.rate_targets, params.feas_tol,
                                          params.tie_tol);
    std::vector<double> mixed(m_users, 0.0);
    for (std::size_t k = 0; k < ts.orders.size(); ++k) {
      const auto rk = mac_rates(inst, ts.orders[k], p_star);
      for (int m = 0; m < m_users; ++m) mixed[m] += ts.weights[k] * rk[m];
    }
    out.achieved_rates = mixed;
    out.time_sharing = std::move(ts);
  } catch (const std::runtime_error&) {
    out.achieved_rates = mac_rates(inst, s.order, p_star);
    out.converged = false;
  }
  return out;
}

TimeSharing recover_time_sharing(const ProblemInstance& inst,
                                 const PowerAllocation& p,
                                 const std::vector<double>& lambda,
                                 const std::vector<double>& targets,
                                 double tol, double tie_tol) {
  const int m_users = inst.num_users;
  SortedLambda s = sort_ascending(lambda);
  auto orders = tie_consistent_orders(lambda, s.order, tie_tol);
  if (orders.size() > 24) orders.resize(24);

  const std::size_t k_orders = orders.size();
  Eigen::MatrixXd vertices(m_users, k_orders);
  for (std::size_t k = 0; k < k_orders; ++k) {
    const auto rk = mac_rates(inst, orders[k], p);
    for (int m = 0; m < m_users; ++m) vertices(m, k) = rk[m];
  }
  Eigen::VectorXd t(m_users);
  for (int m = 0; m < m_users; ++m) t(m) = targets[m];

  auto fit_subset = [&](const std::vector<int>& subset,
                        TimeSharing& ts) -> bool {
    const int sz = static_cast<int>(subset.size());
    Eigen::MatrixXd a(m_users, sz);
    for (int j = 0; j < sz; ++j) a.col(j) = vertices.col(subset[j]);
    // least-squares fit on the simplex face: min ||Aw - t||, sum w = 1
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(sz + 1, sz + 1);
    kkt.topLeftCorner(sz, sz) = a.transpose() * a;
    kkt.topRightCorner(sz, 1).setOnes();
    kkt.bottomLeftCorner(1, sz).setOnes();
    Eigen::VectorXd rhs(sz + 1);
    rhs.head(sz) = a.transpose() * t;
    rhs(sz) = 1.0;
    Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
    if (!sol.allFinite()) return false;
    Eigen::VectorXd w = sol.head(sz);
    if ((w.array() < -1e-9).any()) return false;
    w = w.cwiseMax(0.0);
    const double wsum = w.sum();
    if (wsum <= 0.0) return false;
    w /= wsum;
    if (((a * w - t).array().abs() > tol).any()) return false;
    ts.orders.clear();
    ts.weights.clear();
    for (int j = 0; j < sz; ++j) {
      if (w(j) < 1e-12) continue;
      ts.orders.push_back(orders[subset[j]]);
      ts.weights.push_back(w(j));
    }
    return !ts.orders.empty();
  };

  TimeSharing ts;
  const int max_size = std::min<int>(static_cast<int>(k_orders), m_users + 1);
  for (int sz = 1; sz <= max_size; ++sz) {
    std::vector<int> subset(sz);
    std::iota(subset.begin(), subset.end(), 0);
    long examined = 0;
    while (true) {
      if (fit_subset(subset, ts)) return ts;
      if (++examined > 100000) break;
      // next combination
      int i = sz - 1;
      while (i >= 0 && subset[i] == static_cast<int>(k_orders) - sz + i) --i;
      if (i < 0) break;
      ++subset[i];
      for (int j = i + 1; j < sz; ++j) subset[j] = subset[j - 1] + 1;
    }
  }
  throw std::runtime_error(
      "recover_time_sharing: no weight decomposition meets the targets at the "
      "given tolerance");
}

}  // namespace dpc
