#ifndef IDE_WATERFILL_HPP
#define IDE_WATERFILL_HPP

#include <vector>

#include "ide/labels.hpp"
#include "ide/network.hpp"

namespace ide {

/// Marginal current-travel-time derivative of one outgoing edge as a
/// function of its prospective constant inflow rate z:
///   k(z) = beta             for z <= gamma,
///   k(z) = beta + (z - gamma) / alpha   for z >= gamma.
/// alpha is the edge capacity; beta the plateau level g_e(0)/nu_e + slope of
/// the downstream label; gamma the plateau end (nu_e without a queue, 0 with
/// one). Monotone nondecreasing and continuous.
struct MarginalFn {
    EdgeId edge = -1;
    Rational alpha;  // > 0
    Rational beta;
    Rational gamma;  // >= 0

    Rational eval(const Rational& z) const;
    /// max { z : k(z) <= level }; level must be >= beta.
    Rational fill_to(const Rational& level) const;
    /// Integral of k from 0 to z (the edge's contribution to the objective).
    Rational integral_to(const Rational& z) const;
};

/// One marginal per active out-edge of v, sorted by (beta, edge id).
std::vector<MarginalFn> build_marginals(const Network& n, NodeId v,
                                        const std::vector<EdgeId>& active_out,
                                        const std::vector<Rational>& queues,
                                        const std::vector<Rational>& downstream_slopes);

/// Water-filling output: rates per marginal (aligned with the input order)
/// and the common marginal level of the flow-carrying edges.
struct Distribution {
    std::vector<Rational> rates;
    Rational level;
};

/// Distributes b >= 0 over the sorted marginals so that all flow-carrying
/// edges sit at one common level and every empty edge's plateau is at least
/// that level. Exact; ties resolved by the input order.
Distribution waterfill(const Rational& b, const std::vector<MarginalFn>& ms);

/// True iff the positive rates all sit at the common level and zero-rate
/// edges have k(0) >= level.
bool check_eq8(const Distribution& dist, const std::vector<MarginalFn>& ms);

/// Objective value sum_i integral of k_i from 0 to z_i.
Rational waterfill_objective(const std::vector<MarginalFn>& ms, const std::vector<Rational>& rates);

}  // namespace ide

#endif
