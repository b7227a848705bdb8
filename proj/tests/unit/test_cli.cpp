#include <gtest/gtest.h>

#include <sstream>

#include "qpval/cli.hpp"

using namespace qpval;
using namespace qpval::cli;

namespace {

Json config(const std::string& name) { return load_config(std::string(QPVAL_CONFIG_DIR) + "/" + name + ".json"); }

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run reproduce(const std::string& id, std::optional<Rational> s = std::nullopt)
{
    std::ostringstream out, err;
    const int code = cmd_reproduce(id, s, out, err);
    return {code, out.str(), err.str()};
}

Run price(const Json& cfg, Format format = Format::json)
{
    std::ostringstream out, err;
    const int code = cmd_price(cfg, format, resolve_rng(std::nullopt, cfg, nullptr), out, err);
    return {code, out.str(), err.str()};
}

Run check(const Json& cfg)
{
    std::ostringstream out, err;
    const int code = cmd_check(cfg, resolve_rng(std::nullopt, cfg, nullptr), out, err);
    return {code, out.str(), err.str()};
}

Run validate(const Json& cfg, std::optional<std::size_t> n)
{
    std::ostringstream out, err;
    const int code = cmd_validate(cfg, n, Format::json, resolve_rng(std::nullopt, cfg, nullptr), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST(Reproduce, CompleteExample)
{
    const auto r = reproduce("discrete-complete");
    ASSERT_EQ(r.code, exit_ok) << r.err;
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j["qp_measure"], Json::parse(R"(["0.05","0.45","0","0","0.2","0.3"])"));
    EXPECT_EQ(j["value_payment"], "0.25");
    EXPECT_EQ(j["match"], true);
}

TEST(Reproduce, IncompleteFamily)
{
    for (const Rational s : {Rational(1, 10), Rational(1, 4), Rational(1, 3), Rational(49, 100)}) {
        const auto r = reproduce("discrete-incomplete", s);
        ASSERT_EQ(r.code, exit_ok) << r.err;
        const auto j = Json::parse(r.out);
        EXPECT_EQ(j["value_payment"], to_decimal_string(Rational(1, 5) + s / 10));
        EXPECT_EQ(j["value_hybrid"], to_decimal_string(Rational(3, 50) - s * Rational(1, 25)));
    }
    EXPECT_EQ(Json::parse(reproduce("discrete-incomplete").out)["s"], "0.25");
}

TEST(Reproduce, RejectsBadArguments)
{
    EXPECT_EQ(reproduce("discrete-other").code, exit_usage);
    EXPECT_EQ(reproduce("discrete-incomplete", Rational(1, 2)).code, exit_usage);
    EXPECT_EQ(reproduce("discrete-incomplete", Rational(0)).code, exit_usage);
    EXPECT_EQ(reproduce("discrete-complete", Rational(1, 4)).code, exit_usage);
}

TEST(Price, AffineValueMatchesLibrary)
{
    const Json cfg = config("survival_lagged");
    const auto r = price(cfg);
    ASSERT_EQ(r.code, exit_ok) << r.err;
    const auto j = Json::parse(r.out);
    const auto ctx = model_context_from_json(cfg);
    const products::SurvivalClaimSpec spec{ctx.stock, ctx.intensity("surrender"), 0, 10, affine::SurvivalMode::lagged};
    EXPECT_EQ(j["value"].get<double>(), products::price(ctx.model, spec, ctx.model.initial_state()));
    EXPECT_EQ(j["method"], "affine");
    EXPECT_FALSE(j.contains("stderr"));
}

TEST(Price, CsvLayout)
{
    const auto r = price(config("surrender_option"), Format::csv);
    ASSERT_EQ(r.code, exit_ok);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "product,t,value,stderr_if_mc,method");
    EXPECT_EQ(r.out.substr(r.out.size() - 8), ",affine\n");
}

TEST(Price, ClaytonGoesToMonteCarlo)
{
    Json cfg = config("va_surrender_clayton");
    cfg["mc"]["n"] = 2000;
    const auto r = price(cfg);
    ASSERT_EQ(r.code, exit_ok) << r.err;
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j["method"], "monte_carlo");
    EXPECT_EQ(j["n"], 2000);
    EXPECT_EQ(j["seed"], cfg["seed"]);
    EXPECT_GT(j["stderr"].get<double>(), 0.0);

    cfg["product"]["method"] = "affine";
    EXPECT_EQ(price(cfg).code, exit_usage);
}

TEST(Price, ScheduledReportsSinglePremium)
{
    const auto j = Json::parse(price(config("scheduled")).out);
    EXPECT_NEAR(j["single_premium"].get<double>(), 0.06, 1e-15);
}

TEST(Price, LongevityPath)
{
    const auto r = price(config("longevity"));
    ASSERT_EQ(r.code, exit_ok) << r.err;
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j["weights"].size(), 6u);
    EXPECT_EQ(j["intensity"].size(), 5u);
}

TEST(Price, ConfigErrorsExitTwo)
{
    EXPECT_EQ(price(config("unsupported_model")).code, exit_usage);
    Json cfg = config("survival_lagged");
    cfg["product"]["colour"] = "red";
    EXPECT_EQ(price(cfg).code, exit_usage);
    cfg = config("survival_lagged");
    cfg["extra"] = 1;
    EXPECT_EQ(price(cfg).code, exit_usage);
    cfg = config("survival_lagged");
    cfg["product"]["t"] = 10;
    EXPECT_EQ(price(cfg).code, exit_usage);
    cfg = config("survival_lagged");
    cfg["model"]["theta"] = "diag";
    EXPECT_EQ(price(cfg).code, exit_usage);
}

TEST(Check, VerdictExitCodes)
{
    EXPECT_EQ(check(config("check_nifa")).code, exit_ok);
    EXPECT_EQ(check(config("check_boundary")).code, exit_inconclusive);
    EXPECT_EQ(check(config("check_market_arbitrage")).code, exit_market_arbitrage);

    const auto ifa = check(config("check_hybrid_ifa"));
    ASSERT_EQ(ifa.code, exit_ifa);
    const auto j = Json::parse(ifa.out);
    EXPECT_EQ(j["certificate"]["superhedge_price"][0], "3/50");
    EXPECT_TRUE(j.contains("construction"));
}

TEST(Validate, CorruptedScheduleFails)
{
    const auto r = validate(config("validate_corrupted"), 20000);
    EXPECT_EQ(r.code, exit_failure);
    EXPECT_EQ(Json::parse(r.out)["status"], "fail");
}

TEST(Validate, DefaultModelPassesAndSmallRunsAreFlagged)
{
    const Json cfg = config("default_gaussian");
    const auto r = validate(cfg, 20000);
    EXPECT_EQ(r.code, exit_ok) << r.out;
    const auto small = validate(cfg, 200);
    EXPECT_EQ(small.code, exit_inconclusive);
    EXPECT_NE(small.err.find("underpowered"), std::string::npos);
}

TEST(Determinism, RerunsAreByteIdentical)
{
    Json mc_cfg = config("va_surrender_clayton");
    mc_cfg["mc"]["n"] = 3000;
    EXPECT_EQ(price(mc_cfg).out, price(mc_cfg).out);
    EXPECT_EQ(check(config("check_ifa")).out, check(config("check_ifa")).out);
    EXPECT_EQ(validate(config("default_gaussian"), 3000).out, validate(config("default_gaussian"), 3000).out);
    Json other = mc_cfg;
    other["seed"] = 1;
    EXPECT_NE(price(mc_cfg).out, price(other).out);
}

TEST(Seeds, Precedence)
{
    const Json with_seed = Json::parse(R"({"seed": 5, "stream": 2})");
    const Json without = Json::object();
    EXPECT_EQ(resolve_rng(9, with_seed, "7").seed, 9u);
    EXPECT_EQ(resolve_rng(std::nullopt, with_seed, "7").seed, 5u);
    EXPECT_EQ(resolve_rng(std::nullopt, with_seed, "7").stream, 2u);
    EXPECT_EQ(resolve_rng(std::nullopt, without, "7").seed, 7u);
    EXPECT_EQ(resolve_rng(std::nullopt, without, nullptr).seed, 0u);
    EXPECT_THROW(resolve_rng(std::nullopt, without, "7x"), InputError);
}
