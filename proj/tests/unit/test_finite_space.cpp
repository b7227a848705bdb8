#include <gtest/gtest.h>

#include <random>

#include "qpval/finite.hpp"
#include "../support/finite_oracles.hpp"
#include "../support/random_finite.hpp"

using namespace qpval;
using namespace qpval::finite;
using qpval::testing::measure_from_defining_properties;
using qpval::testing::public_conditional;
using qpval::testing::random_coarsening;
using qpval::testing::random_equivalent_blocks;
using qpval::testing::random_measure;
using qpval::testing::random_partition;
using qpval::testing::random_refinement;
using qpval::testing::random_rv;

namespace {

Rational r(long n, long d = 1) { return Rational(n, d); }

std::vector<Rational> incomplete_q(const Rational& s) { return {s, 1 - 2 * s, s}; }

} // namespace

TEST(Partition, RejectsOverlapAndGaps)
{
    EXPECT_THROW(Partition(3, {{0, 1}, {1, 2}}), StructuralError);
    EXPECT_THROW(Partition(3, {{0, 1}}), StructuralError);
    EXPECT_THROW(Partition(3, {{0, 1}, {}}), StructuralError);
    EXPECT_NO_THROW(Partition(3, {{2}, {0, 1}}));
}

TEST(Partition, RefinementAndMeasurability)
{
    const Partition coarse(4, {{0, 1}, {2, 3}});
    const Partition fine = Partition::discrete(4);
    EXPECT_TRUE(fine.refines(coarse));
    EXPECT_FALSE(coarse.refines(fine));
    EXPECT_TRUE(coarse.is_measurable({r(1), r(1), r(2), r(2)}));
    EXPECT_FALSE(coarse.is_measurable({r(1), r(2), r(2), r(2)}));
    EXPECT_THROW(Filtration({fine, coarse}), StructuralError);
}

TEST(Measure, RejectsBadWeights)
{
    EXPECT_THROW(Measure({r(1, 2), r(1, 3)}), DomainError);
    EXPECT_THROW(Measure({r(3, 2), r(-1, 2)}), DomainError);
    EXPECT_NO_THROW(Measure({r(1, 2), r(1, 2)}));
}

TEST(Rational, ParsesExactDecimals)
{
    EXPECT_EQ(parse_rational("0.1"), r(1, 10));
    EXPECT_EQ(parse_rational("-3/6"), r(-1, 2));
    EXPECT_EQ(parse_rational("2.5e-1"), r(1, 4));
    EXPECT_EQ(parse_rational("7"), r(7));
    EXPECT_THROW(parse_rational("abc"), InputError);
    EXPECT_EQ(to_string(r(3, 4)), "3/4");
}

TEST(Rational, DecimalText)
{
    EXPECT_EQ(to_decimal_string(r(1, 20)), "0.05");
    EXPECT_EQ(to_decimal_string(r(-9, 40)), "-0.225");
    EXPECT_EQ(to_decimal_string(r(3)), "3");
    EXPECT_EQ(to_decimal_string(r(0)), "0");
    EXPECT_EQ(to_decimal_string(r(1, 3)), "1/3");
    EXPECT_EQ(to_decimal_string(r(1001, 1000)), "1.001");
}

TEST(ThreeState, CompleteCaseComposition)
{
    const auto ex = three_state_complete();
    const auto& p = ex.market.reference();
    const auto& pub = ex.market.filtration().at(1);
    const auto qp = qp_compose(std::vector<Rational>{r(1, 2), 0, r(1, 2)}, p, pub);
    const std::vector<Rational> expected{r(5, 100), r(45, 100), 0, 0, r(2, 10), r(3, 10)};
    EXPECT_EQ(qp.weights(), expected);
    EXPECT_EQ(qp_expect(ex.payment, std::vector<Rational>{r(1, 2), 0, r(1, 2)}, p, pub), r(1, 4));
}

TEST(ThreeState, CompleteCaseHasUniqueMartingaleMeasure)
{
    const auto ex = three_state_complete();
    const auto poly = martingale_measures(ex.market);
    ASSERT_TRUE(poly.has_equivalent);
    ASSERT_EQ(poly.vertices.size(), 1u);
    EXPECT_EQ(poly.vertices[0], (std::vector<Rational>{r(1, 2), 0, r(1, 2)}));
}

TEST(ThreeState, IncompleteFamily)
{
    const auto ex = three_state_incomplete();
    const auto& p = ex.market.reference();
    const auto& pub = ex.market.filtration().at(1);
    const auto poly = martingale_measures(ex.market);
    ASSERT_TRUE(poly.has_equivalent);
    ASSERT_EQ(poly.vertices.size(), 2u);
    EXPECT_EQ(poly.vertices[0], (std::vector<Rational>{0, 1, 0}));
    EXPECT_EQ(poly.vertices[1], (std::vector<Rational>{r(1, 2), 0, r(1, 2)}));

    const auto qp = qp_compose(incomplete_q(r(1, 4)), p, pub);
    const std::vector<Rational> expected{r(25, 1000), r(225, 1000), r(1, 10), r(4, 10), r(1, 10), r(15, 100)};
    EXPECT_EQ(qp.weights(), expected);

    for (int num = 1; num < 10; ++num) {
        const Rational s(num, 20);
        const auto q = incomplete_q(s);
        ASSERT_TRUE(is_martingale_measure(poly, q));
        const auto w = qp_compose(q, p, pub).weights();
        EXPECT_EQ(w, (std::vector<Rational>{s / 10, 9 * s / 10, 2 * (1 - 2 * s) / 10, 8 * (1 - 2 * s) / 10, 4 * s / 10,
                                            6 * s / 10}));
        EXPECT_EQ(qp_expect(ex.payment, q, p, pub), r(1, 5) + s / 10);
        EXPECT_EQ(qp_expect(ex.hybrid, q, p, pub), r(6, 100) - 4 * s / 100);
    }
}

TEST(ThreeState, EquivalenceViolationNamesBlock)
{
    const auto ex = three_state_incomplete();
    try {
        (void)qp_compose(std::vector<Rational>{r(1, 2), 0, r(1, 2)}, ex.market.reference(), ex.market.filtration().at(1));
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("block 1"), std::string::npos);
    }
}

TEST(ThreeState, SuperhedgeOfConditionalPayment)
{
    const auto ex = three_state_incomplete();
    const auto& pub = ex.market.filtration().at(1);
    const auto h = conditional_expectation(ex.payment, pub, ex.market.reference());
    EXPECT_EQ(h, (RandomVariable{r(1, 10), r(1, 10), r(2, 10), r(2, 10), r(4, 10), r(4, 10)}));
    const auto res = superhedge_price(h, ex.market, 0);
    EXPECT_EQ(res.price[0], r(1, 4));
    EXPECT_EQ(res.strategy[0][0][0], r(-3, 10));
    const auto gains = strategy_gains(res.strategy, ex.market, 0);
    for (std::size_t w = 0; w < h.size(); ++w) EXPECT_GE(res.price[w] + gains[w], h[w]);

    const auto sub = subhedge_price(h, ex.market, 0, martingale_measures(ex.market));
    EXPECT_EQ(sub.price[0], r(1, 5));
}

TEST(ThreeState, SuperhedgeRejectsNonPublicClaim)
{
    const auto ex = three_state_incomplete();
    EXPECT_THROW(superhedge_price(ex.payment, ex.market, 0), DomainError);
}

TEST(Market, ArbitrageDetected)
{
    // Price goes up in every state: no martingale measure.
    Filtration filt({Partition::trivial(2), Partition::discrete(2)});
    Market m(filt, Measure({r(1, 2), r(1, 2)}), {{RandomVariable(2, r(1))}, {RandomVariable{r(2), r(3)}}});
    const auto poly = martingale_measures(m);
    EXPECT_TRUE(poly.empty);
    EXPECT_FALSE(poly.has_equivalent);
    EXPECT_THROW(superhedge_price(RandomVariable{r(0), r(1)}, m, 0, poly), MarketArbitrageError);
}

TEST(Market, NonEquivalentBoundaryDetected)
{
    // Price never falls; only the flat state can carry mass.
    Filtration filt({Partition::trivial(2), Partition::discrete(2)});
    Market m(filt, Measure({r(1, 2), r(1, 2)}), {{RandomVariable(2, r(1))}, {RandomVariable{r(1), r(2)}}});
    const auto poly = martingale_measures(m);
    EXPECT_FALSE(poly.empty);
    EXPECT_FALSE(poly.has_equivalent);
}

TEST(EssentialBounds, IgnoresNullOutcomes)
{
    const Partition part(4, {{0, 1}, {2, 3}});
    const Measure mu({r(1, 2), 0, 0, r(1, 2)});
    const auto eb = cond_ess_bounds({r(1), r(9), r(-5), r(2)}, part, mu);
    EXPECT_EQ(eb.upper, (RandomVariable{r(1), r(1), r(2), r(2)}));
    EXPECT_EQ(eb.lower, (RandomVariable{r(1), r(1), r(2), r(2)}));
}

// Tower property, agreement with P on finer information, restriction and uniqueness, on random instances.
TEST(QPRuleProperties, RandomInstances)
{
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 14;
        const Partition fine = random_partition(rng, n, 1 + rng() % 5);
        const Measure p = random_measure(rng, n, trial % 3 == 0);
        const auto q = random_equivalent_blocks(rng, p, fine);
        const auto x = random_rv(rng, n);
        const auto qp = qp_compose(q, p, fine);

        // Restriction to the public information is Q.
        EXPECT_EQ(block_masses(qp, fine), q);

        // (i) coarser information: E_{QP}[X|H] = E_Q[E_P[X|F]|H].
        const Partition coarse = random_coarsening(rng, fine);
        const auto inner = conditional_expectation(x, fine, p);
        EXPECT_EQ(qp_conditional(x, q, p, fine, coarse), public_conditional(inner, q, fine, coarse));

        // (ii) finer information: E_{QP}[X|H] = E_P[X|H] on QP-non-null blocks, where both agree with P.
        const Partition finer = random_refinement(rng, fine);
        const auto lhs = conditional_expectation(x, finer, qp);
        const auto rhs = conditional_expectation(x, finer, p);
        for (std::size_t w = 0; w < n; ++w)
            if (qp[w] > 0) EXPECT_EQ(lhs[w], rhs[w]);

        // Uniqueness: the defining properties pin the measure down.
        const auto unique = measure_from_defining_properties(q, p, fine);
        ASSERT_TRUE(unique.has_value());
        EXPECT_EQ(*unique, qp.weights());
    }
}

// Superhedging price dominates every martingale expectation, is attained at a vertex, and the
// returned strategy dominates the claim pathwise.
TEST(SuperhedgeProperties, RandomTrees)
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t horizon = 1 + rng() % 2;
        const std::size_t assets = 1 + rng() % 2;
        auto tm = qpval::testing::random_tree_market(rng, horizon, assets, 3, 2);
        const auto& m = tm.market;
        const auto poly = martingale_measures(m);
        ASSERT_TRUE(poly.has_equivalent);
        const auto& terminal = m.filtration().terminal();
        std::vector<Rational> hb(terminal.num_blocks());
        for (auto& v : hb) v = qpval::testing::random_rational(rng, -2, 4);
        const auto h = expand_blocks(hb, terminal);

        const auto up = superhedge_price(h, m, 0, poly);
        const auto down = subhedge_price(h, m, 0, poly);
        std::optional<Rational> best;
        for (const auto& v : poly.vertices) {
            ASSERT_TRUE(is_martingale_measure(poly, v));
            Rational e = 0;
            for (std::size_t i = 0; i < v.size(); ++i) e += v[i] * hb[i];
            EXPECT_LE(e, up.price[0]);
            EXPECT_GE(e, down.price[0]);
            if (!best || e > *best) best = e;
        }
        EXPECT_EQ(*best, up.price[0]);
        const auto gains = strategy_gains(up.strategy, m, 0);
        const auto sub_gains = strategy_gains(down.strategy, m, 0);
        for (std::size_t w = 0; w < h.size(); ++w) {
            EXPECT_GE(up.price[w] + gains[w], h[w]);
            EXPECT_LE(down.price[w] + sub_gains[w], h[w]);
        }
        const auto bary = barycenter(poly.vertices);
        EXPECT_TRUE(is_martingale_measure(poly, bary));
        EXPECT_TRUE(is_equivalent(poly, bary));
    }
}

TEST(FiniteIO, ParsesModel)
{
    const auto cfg = Json::parse(R"({
        "outcomes": ["u", "d"],
        "P": ["1/2", 0.5],
        "partitions": [[["u", "d"]], [["u"], ["d"]]],
        "assets": [[1, 1], [2, "1/2"]]
    })");
    const auto model = finite_model_from_json(cfg);
    EXPECT_EQ(model.market.horizon(), 1u);
    EXPECT_EQ(model.market.prices()[1][0][1], r(1, 2));
    auto bad = cfg;
    bad["extra"] = 1;
    EXPECT_THROW(finite_model_from_json(bad), InputError);
}
