// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "qpval/cli.hpp"
#include "support/finite_oracles.hpp"
#include "support/random_affine.hpp"
#include "support/random_finite.hpp"

using namespace qpval;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double x)
{
    std::ostringstream s;
    s.precision(4);
    s << x;
    return s.str();
}

Json config(const std::string& name) { return cli::load_config(std::string(QPVAL_CONFIG_DIR) + "/" + name + ".json"); }

// --- 1: three-state composition ---------------------------------------------------------------

Outcome three_state_reproduction()
{
    using finite::qp_compose;
    using finite::qp_expect;
    Outcome o;
    const auto complete = finite::three_state_complete();
    const auto& cm = complete.market;
    const auto& cpub = cm.filtration().terminal();
    const auto cpoly = finite::martingale_measures(cm);
    if (cpoly.vertices.size() != 1) return {false, "complete market has " + std::to_string(cpoly.vertices.size()) + " martingale measures"};
    const auto cq = cpoly.vertices.front();
    const auto ref = cli::reference::complete_qp_measure();
    if (qp_compose(cq, cm.reference(), cpub).weights() != std::vector<Rational>(ref.begin(), ref.end()))
        return {false, "complete composition differs"};
    if (qp_expect(complete.payment, cq, cm.reference(), cpub) != Rational(1, 4)) return {false, "complete E[X] differs from 1/4"};

    const auto inc = finite::three_state_incomplete();
    const auto& m = inc.market;
    const auto& pub = m.filtration().terminal();
    std::size_t checked = 0;
    for (long k = 1; k < 50; ++k) {
        const Rational s(k, 100);
        const std::vector<Rational> q{s, 1 - 2 * s, s};
        const auto expected = cli::reference::incomplete_qp_measure(s);
        if (qp_compose(q, m.reference(), pub).weights() != std::vector<Rational>(expected.begin(), expected.end()))
            return {false, "incomplete composition differs at s=" + to_string(s)};
        if (qp_expect(inc.payment, q, m.reference(), pub) != Rational(1, 5) + s / 10) return {false, "E[X] differs at s=" + to_string(s)};
        if (qp_expect(inc.hybrid, q, m.reference(), pub) != Rational(3, 50) - s / 25) return {false, "E[Y] differs at s=" + to_string(s)};
        ++checked;
    }
    o.detail = "complete case and " + std::to_string(checked) + " values of s exact";
    return o;
}

// --- 2: composed-measure properties -----------------------------------------------------------

Outcome composed_measure_properties()
{
    using namespace qpval::testing;
    using namespace qpval::finite;
    std::mt19937_64 rng(4242);
    std::size_t largest = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 23;
        largest = std::max(largest, n);
        const Partition fine = random_partition(rng, n, 1 + rng() % 6);
        const Measure p = random_measure(rng, n, trial % 3 == 0);
        const auto q = random_equivalent_blocks(rng, p, fine);
        const auto x = random_rv(rng, n);
        const auto qp = qp_compose(q, p, fine);
        const std::string at = " (instance " + std::to_string(trial) + ")";

        if (block_masses(qp, fine) != q) return {false, "restriction to public information is not Q" + at};
        const Partition coarse = random_coarsening(rng, fine);
        if (qp_conditional(x, q, p, fine, coarse) != public_conditional(conditional_expectation(x, fine, p), q, fine, coarse))
            return {false, "tower property on coarser information fails" + at};
        const Partition finer = random_refinement(rng, fine);
        const auto lhs = conditional_expectation(x, finer, qp);
        const auto rhs = conditional_expectation(x, finer, p);
        for (std::size_t w = 0; w < n; ++w)
            if (qp[w] > 0 && lhs[w] != rhs[w]) return {false, "conditional law on finer information differs from P" + at};
        const auto unique = measure_from_defining_properties(q, p, fine);
        if (!unique || *unique != qp.weights()) return {false, "defining properties do not single out the composition" + at};
    }
    return {true, "200 instances, up to " + std::to_string(largest) + " outcomes"};
}

// --- 3: theorem checker golden cases ----------------------------------------------------------

arbitrage::InsuranceMarket single_contract(const finite::ThreeStateMarket& m, const finite::RandomVariable& benefit, const Rational& premium)
{
    return {m.market, {{0, benefit, finite::RandomVariable(6, premium)}}};
}

Outcome checker_golden_cases()
{
    const auto m = finite::three_state_incomplete();
    const auto nifa = arbitrage::check_nifa(single_contract(m, m.payment, Rational(24, 100)));
    if (nifa.status != arbitrage::NifaStatus::certified) return {false, "p = 0.24 on the payment contract is not certified"};
    const auto cert = arbitrage::check_ifa(single_contract(m, m.hybrid, Rational(7, 100)));
    if (!cert) return {false, "p = 0.07 on the hybrid contract gives no certificate"};
    Rational sup = 0;
    for (long k = 0; k <= 50; ++k) sup = std::max(sup, cli::reference::incomplete_hybrid_value(Rational(k, 100)));
    if (cert->superhedge.at(0) != Rational(3, 50) || sup != Rational(3, 50))
        return {false, "superhedge price " + to_string(cert->superhedge.at(0)) + ", sup over s " + to_string(sup)};
    return {true, "NIFA witness found; hybrid superhedge 3/50"};
}

// --- 4: constructed arbitrage -----------------------------------------------------------------

Outcome constructed_arbitrage()
{
    const auto m = finite::three_state_incomplete();
    std::string detail;
    bool pass = true;
    const std::pair<const char*, arbitrage::InsuranceMarket> cases[] = {{"payment", single_contract(m, m.payment, Rational(26, 100))},
                                                                        {"hybrid", single_contract(m, m.hybrid, Rational(7, 100))}};
    for (const auto& [name, ins] : cases) {
        const auto cert = arbitrage::check_ifa(ins);
        if (!cert) return {false, std::string(name) + " contract is not certified"};
        const auto r = arbitrage::construct_arbitrage(ins, *cert, 10000, 1000, {2024, 0});
        const bool ok = r.min >= -r.noise_band && r.positive_fraction >= 0.9 * r.trigger_probability;
        pass = pass && ok;
        detail += std::string(detail.empty() ? "" : "; ") + name + ": min " + fmt(r.min) + " vs -" + fmt(r.noise_band) + ", positive " +
                  fmt(r.positive_fraction);
    }
    return {pass, detail};
}

// --- 5: closed forms against the simulation oracle --------------------------------------------

Outcome affine_against_oracle()
{
    const Json cfg = config("default_gaussian");
    const auto ctx = cli::model_context_from_json(cfg);
    auto spec = cli::validation_from_json(cfg, ctx);
    spec.n = 200000;
    spec.horizon = 12;
    double worst = 0.0;
    std::string worst_name;
    for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
        const auto rep = cli::run_validation(ctx, spec, {seed, 0});
        for (const auto& c : rep.comparisons)
            if (std::abs(c.z) > worst) {
                worst = std::abs(c.z);
                worst_name = c.name + " seed " + std::to_string(seed);
            }
    }
    return {worst <= 3.0, "6 products x 5 seeds, max |z| " + fmt(worst) + " (" + worst_name + ")"};
}

// --- 6: recursion verifier --------------------------------------------------------------------

Outcome recursion_verifier()
{
    std::mt19937_64 rng(1618);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const std::size_t dx = 1 + rng() % 2, dy = 1 + rng() % 2;
        const auto model = qpval::testing::random_gaussian_model(rng, dx, dy);
        const std::size_t horizon = 1 + rng() % 12;
        const auto sched = qpval::testing::random_schedule(rng, dx, dy, 0, horizon);
        const auto rep = affine::verify_recursion(model, sched, affine::run_recursion(model, sched));
        if (!rep.joint_checked) return {false, "joint transform check skipped"};
        worst = std::max({worst, rep.max_residual, rep.max_qp_residual});
    }
    return {worst <= 1e-12, "100 coefficient sets, max residual " + fmt(worst)};
}

// --- 7: two-time partition --------------------------------------------------------------------

stopping::IntensityPath random_path(std::mt19937_64& rng, std::size_t horizon, double max_step)
{
    std::uniform_real_distribution<double> step(0.0, max_step);
    std::vector<double> c(horizon + 1, 0.0);
    for (std::size_t t = 1; t <= horizon; ++t) c[t] = c[t - 1] + step(rng);
    return stopping::IntensityPath(std::move(c));
}

Outcome two_time_partition()
{
    using stopping::Copula2;
    std::mt19937_64 rng(2727);
    double worst_mass = 0.0;
    for (int k = 0; k < 100; ++k) {
        const auto first = random_path(rng, 12, 0.5), second = random_path(rng, 12, 0.5);
        for (const auto& c : {Copula2::independence(), Copula2::clayton(0.5 + k % 4), Copula2::frank(k % 2 ? 4.0 : -4.0)}) {
            const stopping::JointSurvival js{first, second, c};
            for (std::size_t t = 0; t <= 12; ++t) worst_mass = std::max(worst_mass, std::abs(stopping::partition_probs(js, t).total() - 1.0));
        }
    }
    double worst_z = 0.0;
    std::uint64_t stream = 0;
    for (const auto& c : {Copula2::independence(), Copula2::clayton(2.0), Copula2::frank(-3.0)}) {
        const stopping::JointSurvival js{random_path(rng, 6, 0.4), random_path(rng, 6, 0.4), c};
        worst_z = std::max(worst_z, stopping::empirical_partition_check(js, 4, 1000000, {77, stream++}).max_z);
    }
    return {worst_mass <= 1e-12 && worst_z <= 4.0, "max mass error " + fmt(worst_mass) + ", max frequency z " + fmt(worst_z)};
}

// --- 8: market consistency --------------------------------------------------------------------

Outcome market_consistency()
{
    using namespace qpval::finite;
    std::mt19937_64 rng(8080);
    for (int k = 0; k < 100; ++k) {
        const auto tree = qpval::testing::random_tree_market(rng, 2, 1 + k % 2, 3, 2);
        const auto& market = tree.market;
        const auto& terminal = market.filtration().terminal();
        const auto poly = martingale_measures(market);
        if (!poly.has_equivalent) return {false, "random tree without an equivalent martingale measure"};
        const auto q = barycenter(poly.vertices);
        std::vector<Rational> h_blocks(terminal.num_blocks());
        for (auto& x : h_blocks) x = qpval::testing::random_rational(rng, -3, 3);
        const RandomVariable h = expand_blocks(h_blocks, terminal);
        const auto h2 = qpval::testing::random_rv(rng, market.space_size());
        std::vector<Rational> flat(market.space_size());
        for (std::size_t b = 0; b < terminal.num_blocks(); ++b)
            for (auto o : terminal.block(b)) flat[o] = q[b] / static_cast<long>(terminal.block(b).size());
        const Measure q_flat(flat);
        for (std::size_t t = 0; t <= market.horizon(); ++t) {
            const auto& info = market.filtration().at(t);
            const auto gap = qp_conditional(h + h2, q, market.reference(), terminal, info) - conditional_expectation(h, info, q_flat) -
                             qp_conditional(h2, q, market.reference(), terminal, info);
            for (const auto& v : gap)
                if (v != 0) return {false, "nonzero residual on instance " + std::to_string(k) + " at t=" + std::to_string(t)};
        }
    }
    return {true, "100 instances, all residuals exactly 0"};
}

// --- 9: law of large numbers diagnostics ------------------------------------------------------

Outcome slln_rate()
{
    const auto m = finite::three_state_incomplete();
    const auto rep = arbitrage::slln_experiment(arbitrage::conditional_laws(m.payment, m.market), {100, 1000, 10000, 100000}, 40, {99, 0});
    if (!rep.exponent) return {false, "no exponent fitted"};
    return {*rep.exponent >= -0.6 && *rep.exponent <= -0.4, "exponent " + fmt(*rep.exponent)};
}

// --- 10: determinism --------------------------------------------------------------------------

Outcome determinism()
{
    // Each command returns its exit code and everything it printed.
    using Command = std::function<std::pair<int, std::string>()>;
    const auto capture = [](const std::function<int(std::ostream&, std::ostream&)>& f) {
        std::ostringstream out, err;
        const int code = f(out, err);
        return std::pair{code, out.str() + err.str()};
    };
    const auto price_cmd = [&](const std::string& name, cli::Format format) -> Command {
        return [=] {
            Json cfg = config(name);
            if (cfg.contains("mc")) cfg["mc"]["n"] = 20000;
            return capture([&](std::ostream& o, std::ostream& e) { return cli::cmd_price(cfg, format, cli::resolve_rng(std::nullopt, cfg, nullptr), o, e); });
        };
    };
    const auto check_cmd = [&](const std::string& name) -> Command {
        return [=] {
            const Json cfg = config(name);
            return capture([&](std::ostream& o, std::ostream& e) { return cli::cmd_check(cfg, cli::resolve_rng(std::nullopt, cfg, nullptr), o, e); });
        };
    };
    const auto validate_cmd = [&](const std::string& name) -> Command {
        return [=] {
            const Json cfg = config(name);
            return capture([&](std::ostream& o, std::ostream& e) {
                return cli::cmd_validate(cfg, 20000, cli::Format::json, cli::resolve_rng(std::nullopt, cfg, nullptr), o, e);
            });
        };
    };
    struct Case {
        std::string name;
        Command run;
        int expected_code;
    };
    const std::vector<Case> commands{
        {"reproduce complete", [&] { return capture([](std::ostream& o, std::ostream& e) { return cli::cmd_reproduce("discrete-complete", std::nullopt, o, e); }); }, cli::exit_ok},
        {"reproduce incomplete", [&] { return capture([](std::ostream& o, std::ostream& e) { return cli::cmd_reproduce("discrete-incomplete", Rational(1, 3), o, e); }); }, cli::exit_ok},
        {"price survival", price_cmd("survival_lagged", cli::Format::json), cli::exit_ok},
        {"price va csv", price_cmd("va_surrender", cli::Format::csv), cli::exit_ok},
        {"price va clayton", price_cmd("va_surrender_clayton", cli::Format::json), cli::exit_ok},
        {"price scheduled", price_cmd("scheduled", cli::Format::json), cli::exit_ok},
        {"price longevity", price_cmd("longevity", cli::Format::json), cli::exit_ok},
        {"check nifa", check_cmd("check_nifa"), cli::exit_ok},
        {"check ifa", check_cmd("check_ifa"), cli::exit_ifa},
        {"check hybrid", check_cmd("check_hybrid_ifa"), cli::exit_ifa},
        {"validate", validate_cmd("default_gaussian"), cli::exit_ok},
        {"validate corrupted", validate_cmd("validate_corrupted"), cli::exit_failure},
    };
    for (const auto& c : commands) {
        const auto first = c.run();
        if (first.first != c.expected_code)
            return {false, c.name + " exited " + std::to_string(first.first) + ", expected " + std::to_string(c.expected_code)};
        if (c.run() != first) return {false, c.name + " output differs between runs"};
    }
    return {true, std::to_string(commands.size()) + " commands rerun byte-identical"};
}

} // namespace

int main()
{
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
        double limit_seconds; // 0: no runtime limit
    };
    const Criterion criteria[] = {
        {"three-state example reproduced exactly", three_state_reproduction, 1.0},
        {"composed measure properties on random spaces", composed_measure_properties, 10.0},
        {"arbitrage checker golden cases", checker_golden_cases, 0.0},
        {"constructed arbitrage converges", constructed_arbitrage, 60.0},
        {"affine closed forms match the simulation oracle", affine_against_oracle, 300.0},
        {"recursion verifier on random coefficients", recursion_verifier, 0.0},
        {"two-time partition identity and frequencies", two_time_partition, 0.0},
        {"market consistency on random trees", market_consistency, 0.0},
        {"law of large numbers rate", slln_rate, 60.0},
        {"deterministic reruns", determinism, 0.0},
    };
    int failures = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_seconds > 0.0 && secs > c.limit_seconds) {
            o.pass = false;
            o.detail += "; took " + fmt(secs) + " s, limit " + fmt(c.limit_seconds) + " s";
        }
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << index << ": " << c.name << " [" << o.detail << "] (" << fmt(secs) << " s)"
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
