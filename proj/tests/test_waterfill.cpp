#include <doctest.h>

#include <cstdint>
#include <vector>

#include "ide/errors.hpp"
#include "ide/instances.hpp"
#include "ide/labels.hpp"
#include "ide/waterfill.hpp"

using ide::Distribution;
using ide::MarginalFn;
using ide::Rational;

namespace {

Rational r(long num, long den = 1) { return Rational(num, den); }

MarginalFn mf(int edge, Rational alpha, Rational beta, Rational gamma) {
    return MarginalFn{edge, std::move(alpha), std::move(beta), std::move(gamma)};
}

Rational sum(const std::vector<Rational>& zs) {
    Rational s(0);
    for (const Rational& z : zs) s += z;
    return s;
}

struct Rng {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

}  // namespace

TEST_CASE("build_marginals encodes the two queue branches") {
    ide::Network n = ide::parse_network(R"({
        "nodes": ["s", "a", "t"],
        "sink": "t",
        "edges": [{"tail": "s", "head": "t", "tau": "1", "nu": "2"},
                   {"tail": "s", "head": "a", "tau": "1", "nu": "1"},
                   {"tail": "a", "head": "t", "tau": "1", "nu": "5"}],
        "inflows": []
    })");
    std::vector<Rational> queues{r(0), r(1), r(0)};
    std::vector<Rational> slopes(n.node_count(), r(0));

    // q=0, nu=2, downstream slope 0: plateau until the capacity
    auto ms = ide::build_marginals(n, n.node_id("s"), {0}, queues, slopes);
    CHECK(ms[0].alpha == r(2));
    CHECK(ms[0].beta == r(0));
    CHECK(ms[0].gamma == r(2));

    // q>0, nu=1, downstream slope 1: k(z) = z
    slopes[n.node_id("a")] = r(1);
    ms = ide::build_marginals(n, n.node_id("s"), {1}, queues, slopes);
    CHECK(ms[0].alpha == r(1));
    CHECK(ms[0].beta == r(0));
    CHECK(ms[0].gamma == r(0));
    CHECK(ms[0].eval(r(2)) == r(2));

    // q>0, nu=1, downstream slope 0: a draining queue starts at k(0) = -1
    slopes[n.node_id("a")] = r(0);
    ms = ide::build_marginals(n, n.node_id("s"), {1}, queues, slopes);
    CHECK(ms[0].beta == r(-1));
    CHECK(ms[0].gamma == r(0));
}

TEST_CASE("waterfill splits symmetric edges evenly") {
    std::vector<MarginalFn> ms{mf(0, r(1), r(0), r(1)), mf(1, r(1), r(0), r(1))};
    Distribution d = ide::waterfill(r(4), ms);
    CHECK(d.rates[0] == r(2));
    CHECK(d.rates[1] == r(2));
    CHECK(d.level == r(1));
    CHECK(ide::check_eq8(d, ms));
}

TEST_CASE("waterfill hand-checked asymmetric instance") {
    // common level c solves (2 + 2c) + c = 3, so c = 1/3
    std::vector<MarginalFn> ms{mf(0, r(2), r(0), r(2)), mf(1, r(1), r(0), r(0))};
    Distribution d = ide::waterfill(r(3), ms);
    CHECK(d.rates[0] == r(8, 3));
    CHECK(d.rates[1] == r(1, 3));
    CHECK(d.level == r(1, 3));
    CHECK(ide::check_eq8(d, ms));
}

TEST_CASE("waterfill with zero volume returns the lowest plateau") {
    std::vector<MarginalFn> ms{mf(0, r(1), r(-1), r(0)), mf(1, r(1), r(2), r(3))};
    Distribution d = ide::waterfill(r(0), ms);
    CHECK(sum(d.rates) == r(0));
    CHECK(d.level == r(-1));
    CHECK(ide::check_eq8(d, ms));
    CHECK_THROWS_AS(ide::waterfill(r(-1), ms), ide::InputError);
}

TEST_CASE("waterfill dumps the remainder onto the next plateau") {
    // first edge fills to the second plateau with room to spare; the rest
    // lands on edge 1's flat part below its capacity
    std::vector<MarginalFn> ms{mf(0, r(1), r(0), r(0)), mf(1, r(1), r(2), r(10))};
    Distribution d = ide::waterfill(r(5), ms);
    CHECK(d.rates[0] == r(2));
    CHECK(d.rates[1] == r(3));
    CHECK(d.level == r(2));
    CHECK(ide::check_eq8(d, ms));
}

TEST_CASE("check_eq8 rejects an unbalanced split") {
    std::vector<MarginalFn> ms{mf(0, r(1), r(0), r(1)), mf(1, r(1), r(0), r(1))};
    Distribution bad;
    bad.rates = {r(3), r(0)};
    bad.level = ms[0].eval(r(3));  // 2, while edge 1 idles at plateau 0
    CHECK(!ide::check_eq8(bad, ms));

    Distribution single;
    single.rates = {r(7)};
    std::vector<MarginalFn> one{mf(0, r(2), r(1), r(3))};
    single.level = one[0].eval(r(7));
    CHECK(ide::check_eq8(single, one));
}

TEST_CASE("waterfill conservation and monotonicity on random instances") {
    Rng rng{20240817ULL};
    for (int trial = 0; trial < 300; ++trial) {
        int p = 1 + rng.below(4);
        std::vector<MarginalFn> ms;
        for (int i = 0; i < p; ++i) {
            Rational alpha(1 + rng.below(10), 1 + rng.below(10));
            Rational beta(rng.below(21) - 10, 1 + rng.below(10));
            Rational gamma(rng.below(11), 1 + rng.below(10));
            ms.push_back(mf(i, alpha, beta, gamma));
        }
        std::sort(ms.begin(), ms.end(), [](const MarginalFn& a, const MarginalFn& b) {
            if (a.beta != b.beta) return a.beta < b.beta;
            return a.edge < b.edge;
        });
        Rational b1(rng.below(40), 1 + rng.below(4));
        Rational b2 = b1 + Rational(1 + rng.below(8), 1 + rng.below(4));
        Distribution d1 = ide::waterfill(b1, ms);
        Distribution d2 = ide::waterfill(b2, ms);
        CHECK(sum(d1.rates) == b1);
        CHECK(sum(d2.rates) == b2);
        CHECK(ide::check_eq8(d1, ms));
        CHECK(ide::check_eq8(d2, ms));
        // more volume never shrinks any edge's share
        for (int i = 0; i < p; ++i) CHECK(d1.rates[i] <= d2.rates[i]);
    }
}

TEST_CASE("waterfill level is permutation independent") {
    std::vector<MarginalFn> ms{mf(0, r(1), r(0), r(1)), mf(1, r(2), r(0), r(0)),
                               mf(2, r(1), r(1), r(2))};
    Distribution d = ide::waterfill(r(6), ms);
    // feeding the same set under different ids, re-sorted, gives one level
    std::vector<MarginalFn> relabeled{mf(2, r(1), r(0), r(1)), mf(0, r(2), r(0), r(0)),
                                      mf(1, r(1), r(1), r(2))};
    std::sort(relabeled.begin(), relabeled.end(), [](const MarginalFn& a, const MarginalFn& b) {
        if (a.beta != b.beta) return a.beta < b.beta;
        return a.edge < b.edge;
    });
    Distribution d2 = ide::waterfill(r(6), relabeled);
    CHECK(d.level == d2.level);
}
