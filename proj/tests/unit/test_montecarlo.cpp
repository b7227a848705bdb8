#include <gtest/gtest.h>

#include <cmath>

#include "qpval/affine.hpp"
#include "qpval/finite.hpp"
#include "qpval/montecarlo.hpp"
#include "qpval/products.hpp"

using namespace qpval;
using namespace qpval::affine;

namespace {

Vec vec(std::initializer_list<double> xs)
{
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

class OpaqueModel final : public AffineModel {
public:
    std::size_t private_dim() const override { return 1; }
    std::size_t public_dim() const override { return 1; }
    const Vec& initial_state() const override { return z_; }
    AffineExponent p_transform(const Vec&) const override { return {0.0, Vec::Zero(2)}; }
    AffineExponent q_transform(const Vec&) const override { return {0.0, Vec::Zero(1)}; }
    SplitExponent conditional_split(const Vec&) const override { return {0.0, Vec::Zero(1), Vec::Zero(1), Vec::Zero(1)}; }

private:
    Vec z_ = Vec::Zero(2);
};

mc::NestedConfig horizon_config(const GaussianFactorModel& m, std::size_t horizon, std::size_t n)
{
    mc::NestedConfig cfg;
    cfg.horizon = horizon;
    cfg.z_start = m.initial_state();
    cfg.outer = n;
    return cfg;
}

} // namespace

TEST(SimulatePaths, ZeroNoiseIsDeterministic)
{
    Mat theta(2, 2);
    theta << 0.5, 0.2, 0.0, 0.9;
    const GaussianFactorModel m(1, vec({0.01, 0.02}), vec({0.02}), theta, Mat::Zero(2, 2), vec({0.1, -0.3}));
    const auto batch = mc::simulate_paths(m, mc::PathLaw::p, 1, 0, 6, m.initial_state(), {1, 0});
    Vec z = m.initial_state();
    for (std::size_t s = 1; s <= 6; ++s) {
        z = m.drift() + theta * z;
        EXPECT_NEAR((batch.state(0, s) - z).cwiseAbs().maxCoeff(), 0.0, 1e-15);
    }
    // The composed law also collapses to the same path.
    const auto qp = mc::simulate_paths(m, mc::PathLaw::qp, 1, 0, 6, m.initial_state(), {1, 0});
    EXPECT_NEAR((qp.state(0, 6) - z).cwiseAbs().maxCoeff(), 0.0, 1e-15);
    EXPECT_THROW(GaussianFactorModel(1, vec({0.01, 0.02}), vec({0.03}), theta, Mat::Zero(2, 2), vec({0, 0})), DomainError);
}

TEST(SimulatePaths, FirstStepMean)
{
    const auto setup = default_gaussian_setup();
    const auto& m = setup.model;
    const std::size_t n = 1000000;
    const auto batch = mc::simulate_paths(m, mc::PathLaw::p, n, 0, 1, m.initial_state(), {2024, 3});
    const Vec expected = m.drift() + m.transition() * m.initial_state();
    for (Eigen::Index k = 0; k < 2; ++k) {
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i) xs[i] = batch.state(i, 1)[k];
        const auto e = mc::summarize(xs, {2024, 3});
        EXPECT_NEAR(e.mean, expected[k], 4 * e.stderr) << k;
    }
}

TEST(SimulatePaths, DeterministicGivenSpec)
{
    const auto setup = default_gaussian_setup();
    const auto a = mc::simulate_paths(setup.model, mc::PathLaw::qp, 50, 2, 9, setup.model.initial_state(), {9, 1});
    const auto b = mc::simulate_paths(setup.model, mc::PathLaw::qp, 50, 2, 9, setup.model.initial_state(), {9, 1});
    const auto c = mc::simulate_paths(setup.model, mc::PathLaw::qp, 50, 2, 9, setup.model.initial_state(), {9, 2});
    bool differs = false;
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t s = 2; s <= 9; ++s) {
            EXPECT_EQ(a.state(i, s), b.state(i, s));
            differs = differs || a.state(i, s) != c.state(i, s);
        }
    EXPECT_TRUE(differs);
}

TEST(SimulatePaths, NeedsSampler)
{
    const OpaqueModel opaque;
    EXPECT_THROW(mc::simulate_paths(opaque, mc::PathLaw::p, 1, 0, 1, Vec::Zero(2), {1, 0}), CapabilityError);
}

TEST(Nested, ConstantPayoff)
{
    const auto setup = default_gaussian_setup();
    const auto e = mc::estimate_qp_nested(setup.model, [](const mc::Scenario&) { return 1.0; },
                                          horizon_config(setup.model, 5, 1000), {1, 0});
    EXPECT_EQ(e.mean, 1.0);
    EXPECT_EQ(e.stderr, 0.0);
    EXPECT_EQ(e.n, 1000u);
}

TEST(Nested, NonFinitePayoffReportsPath)
{
    const auto setup = default_gaussian_setup();
    try {
        (void)mc::estimate_qp_nested(setup.model, [](const mc::Scenario&) { return NAN; },
                                     horizon_config(setup.model, 2, 10), {1, 0});
        FAIL();
    } catch (const NumericError& e) {
        EXPECT_NE(std::string(e.what()).find("sample 0"), std::string::npos);
    }
}

TEST(Nested, DiscountedStockIsMartingale)
{
    const auto setup = default_gaussian_setup();
    const auto stock = setup.stock;
    const mc::Payoff terminal = [stock](const mc::Scenario& sc) {
        return stock.price(sc.horizon(), sc.state(sc.horizon()).tail(1));
    };
    for (auto mode : {mc::NestedMode::structural, mc::NestedMode::density}) {
        auto cfg = horizon_config(setup.model, 12, 100000);
        cfg.mode = mode;
        const auto e = mc::estimate_qp_nested(setup.model, terminal, cfg, {31, 0});
        EXPECT_NEAR(e.mean, stock.price(0, setup.model.initial_state().tail(1)), 3 * e.stderr);
    }
}

TEST(Nested, StructuralAndDensityAgree)
{
    const auto setup = default_gaussian_setup();
    const auto payoff = mc::make_payoff(products::SurvivalClaimSpec{setup.stock, setup.surrender, 0, 12, SurvivalMode::strict});
    auto cfg = horizon_config(setup.model, 12, 100000);
    const auto a = mc::estimate_qp_nested(setup.model, payoff, cfg, {5, 0});
    cfg.mode = mc::NestedMode::density;
    const auto b = mc::estimate_qp_nested(setup.model, payoff, cfg, {5, 1});
    EXPECT_NEAR(a.mean, b.mean, 3 * std::hypot(a.stderr, b.stderr));
}

TEST(Nested, InnerDrawsKeepMean)
{
    const auto setup = default_gaussian_setup();
    const auto payoff = mc::make_payoff(products::SurvivalClaimSpec{setup.stock, setup.surrender, 0, 8, SurvivalMode::strict});
    auto cfg = horizon_config(setup.model, 8, 20000);
    cfg.inner = 8;
    const auto e = mc::estimate_qp_nested(setup.model, payoff, cfg, {12, 0});
    const double closed = price_survival_claim(setup.model, setup.stock, setup.surrender, 0, 8, setup.model.initial_state(),
                                               SurvivalMode::strict);
    EXPECT_NEAR(e.mean, closed, 3 * e.stderr);
}

TEST(Nested, AntitheticReducesError)
{
    const auto setup = default_gaussian_setup();
    const auto payoff = mc::make_payoff(products::SurvivalClaimSpec{setup.stock, setup.surrender, 0, 12, SurvivalMode::strict});
    auto cfg = horizon_config(setup.model, 12, 40000);
    const auto plain = mc::estimate_qp_nested(setup.model, payoff, cfg, {77, 0});
    cfg.antithetic = true;
    const auto anti = mc::estimate_qp_nested(setup.model, payoff, cfg, {77, 0});
    EXPECT_LE(anti.stderr, plain.stderr);
}

TEST(Nested, StderrScaling)
{
    const auto setup = default_gaussian_setup();
    const auto payoff = mc::make_payoff(products::SurvivalClaimSpec{setup.stock, setup.surrender, 0, 6, SurvivalMode::strict});
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto small = mc::estimate_qp_nested(setup.model, payoff, horizon_config(setup.model, 6, 5000), {seed, 0});
        const auto big = mc::estimate_qp_nested(setup.model, payoff, horizon_config(setup.model, 6, 20000), {seed, 1});
        const double ratio = big.stderr / small.stderr;
        EXPECT_GE(ratio, 0.4);
        EXPECT_LE(ratio, 0.6);
    }
}

TEST(Nested, WorkerCountDoesNotChangeResult)
{
    const auto setup = default_gaussian_setup();
    const auto payoff = mc::make_payoff(products::SurvivalClaimSpec{setup.stock, setup.surrender, 0, 6, SurvivalMode::strict});
    auto cfg = horizon_config(setup.model, 6, 3000);
    const auto one = mc::estimate_qp_nested(setup.model, payoff, cfg, {4, 0});
    cfg.workers = 4;
    const auto four = mc::estimate_qp_nested(setup.model, payoff, cfg, {4, 0});
    EXPECT_EQ(one.mean, four.mean);
    EXPECT_EQ(one.stderr, four.stderr);
}

// With no public noise the public filtration is trivial: the composed law is P itself and the
// finite QP-rule on a one-block public partition is the plain P-mean. Private X_1 is two-point in
// the finite model with the Gaussian's first two moments (a degenerate embedding of the first step).
TEST(Nested, MatchesFiniteRuleWhenPublicSideIsDeterministic)
{
    Mat theta = Mat::Zero(2, 2);
    Mat sigma = Mat::Zero(2, 2);
    sigma(0, 0) = 0.04;
    const GaussianFactorModel m(1, vec({0.1, 0.0}), vec({0.0}), theta, sigma, vec({0.0, 0.0}));
    const mc::Payoff square = [](const mc::Scenario& sc) { return sc.state(1)[0] * sc.state(1)[0]; };
    const auto e = mc::estimate_qp_nested(m, square, horizon_config(m, 1, 200000), {8, 0});

    using namespace qpval::finite;
    const Measure p(std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    const RandomVariable x1{Rational(-1, 10), Rational(3, 10)}; // mean 0.1, std 0.2
    const auto sq = x1 * x1;
    const auto trivial = Partition::trivial(2);
    const double exact = to_double(finite::qp_expect(sq, std::vector<Rational>{1}, p, trivial));
    EXPECT_NEAR(e.mean, exact, 3 * e.stderr);
}

TEST(Nested, ZeroIntensityProducts)
{
    const auto setup = default_gaussian_setup();
    const auto zero = IntensitySpec::zero(1, 1);
    mc::McOptions opt;
    opt.n = 2000;
    const auto so = mc::estimate_product(products::SurrenderOptionSpec{setup.stock, zero, 0, 12}, setup.model,
                                         setup.model.initial_state(), opt, {1, 0});
    EXPECT_EQ(so.mean, 0.0);
    EXPECT_EQ(so.stderr, 0.0);
}

TEST(Estimate, JsonShape)
{
    const mc::QPEstimate e{1.5, 0.25, 10, 7, 3};
    const auto j = mc::to_json(e);
    EXPECT_EQ(j["mean"], 1.5);
    EXPECT_EQ(j["stderr"], 0.25);
    EXPECT_EQ(j["n"], 10);
    EXPECT_EQ(j["seed"], 7);
    EXPECT_EQ(j["stream"], 3);
    EXPECT_THROW(mc::summarize({1.0}, {1, 0}), DomainError);
}
