#include "ide/waterfill.hpp"

#include <algorithm>

#include "ide/errors.hpp"

namespace ide {

Rational MarginalFn::eval(const Rational& z) const {
    if (z <= gamma) return beta;
    return beta + (z - gamma) / alpha;
}

Rational MarginalFn::fill_to(const Rational& level) const {
    if (level < beta) throw InternalError("waterfill: fill_to below the plateau");
    return gamma + alpha * (level - beta);
}

Rational MarginalFn::integral_to(const Rational& z) const {
    Rational v = beta * z;
    if (z > gamma) {
        Rational over = z - gamma;
        v += over * over / (alpha * 2);
    }
    return v;
}

std::vector<MarginalFn> build_marginals(const Network& n, NodeId v,
                                        const std::vector<EdgeId>& active_out,
                                        const std::vector<Rational>& queues,
                                        const std::vector<Rational>& downstream_slopes) {
    std::vector<MarginalFn> ms;
    ms.reserve(active_out.size());
    for (EdgeId e : active_out) {
        const Edge& ed = n.edge(e);
        if (ed.tail != v) throw InternalError("build_marginals: edge does not leave the node");
        MarginalFn m;
        m.edge = e;
        m.alpha = ed.capacity;
        if (queues[e].sign() > 0) {
            // g_e(z) = z - nu: the queue moves immediately, k(0) = slope_w - 1
            m.beta = downstream_slopes[ed.head] - Rational(1);
            m.gamma = Rational(0);
        } else {
            // g_e(z) = max(z - nu, 0): flat until the capacity is saturated
            m.beta = downstream_slopes[ed.head];
            m.gamma = ed.capacity;
        }
        ms.push_back(std::move(m));
    }
    std::sort(ms.begin(), ms.end(), [](const MarginalFn& a, const MarginalFn& b) {
        if (a.beta != b.beta) return a.beta < b.beta;
        return a.edge < b.edge;
    });
    return ms;
}

Distribution waterfill(const Rational& b, const std::vector<MarginalFn>& ms) {
    if (b.sign() < 0) throw InputError("waterfill: negative inflow");
    if (ms.empty()) throw InputError("waterfill: no active edges to fill");
    const std::size_t p = ms.size();
    for (std::size_t i = 0; i + 1 < p; ++i)
        if (ms[i + 1].beta < ms[i].beta) throw InputError("waterfill: marginals not sorted");

    Distribution d;
    d.rates.assign(p, Rational(0));

    // maximal r with sum_{i<=r} max{z : k_i(z) <= beta_r} <= b  (sum is
    // nondecreasing in r, so a linear scan suffices)
    std::size_t r = 0;
    for (std::size_t cand = 1; cand <= p; ++cand) {
        Rational need(0);
        for (std::size_t i = 0; i < cand; ++i) need += ms[i].fill_to(ms[cand - 1].beta);
        if (need <= b)
            r = cand;
        else
            break;
    }

    if (r < p) {
        Rational filled(0);
        for (std::size_t i = 0; i < r; ++i) filled += ms[i].fill_to(ms[r].beta);
        if (filled <= b) {
            // fill the first r edges to the next plateau and put the
            // remainder onto edge r+1's plateau
            for (std::size_t i = 0; i < r; ++i) d.rates[i] = ms[i].fill_to(ms[r].beta);
            d.rates[r] = b - filled;
            d.level = b.is_zero() ? ms[0].beta : ms[r].beta;
            return d;
        }
    }

    // fill the first r edges to beta_r, then raise them together,
    // distributing the surplus proportionally to the alphas
    Rational filled(0);
    Rational alpha_sum(0);
    for (std::size_t i = 0; i < r; ++i) {
        d.rates[i] = ms[i].fill_to(ms[r - 1].beta);
        filled += d.rates[i];
        alpha_sum += ms[i].alpha;
    }
    Rational surplus = b - filled;
    if (surplus.sign() < 0) throw InternalError("waterfill: negative surplus");
    for (std::size_t i = 0; i < r; ++i) d.rates[i] += ms[i].alpha * surplus / alpha_sum;
    d.level = ms[r - 1].beta + surplus / alpha_sum;
    return d;
}

bool check_eq8(const Distribution& dist, const std::vector<MarginalFn>& ms) {
    if (dist.rates.size() != ms.size()) return false;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const Rational& z = dist.rates[i];
        if (z.sign() < 0) return false;
        if (z.sign() > 0) {
            if (ms[i].eval(z) != dist.level) return false;
        } else {
            if (ms[i].beta < dist.level) return false;
        }
    }
    return true;
}

Rational waterfill_objective(const std::vector<MarginalFn>& ms, const std::vector<Rational>& rates) {
    Rational total(0);
    for (std::size_t i = 0; i < ms.size(); ++i) total += ms[i].integral_to(rates[i]);
    return total;
}

}  // namespace ide
