#pragma once

// Command implementations behind the qpval executable. Each writes its report to `out`,
// diagnostics to `err`, and returns the process exit code.
//
// Exit codes:
//   0  success (reproduce matched, price computed, NIFA certified, validation passed)
//   1  mismatch, failed validation, or a numerical failure
//   2  usage or config error, unknown example id, missing capability
//   3  check: IFA certificate found
//   4  check: inconclusive; validate: sample size below the configured minimum
//   5  check: the financial market itself admits arbitrage

#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "qpval/cli/config.hpp"
#include "qpval/cli/reference.hpp"
#include "qpval/cli/validate.hpp"
#include "qpval/finite.hpp"

namespace qpval::cli {

enum class Format { json, csv };

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_usage = 2,
    exit_ifa = 3,
    exit_inconclusive = 4,
    exit_market_arbitrage = 5,
};

inline Json report_header(const std::string& command)
{
    return Json{{"schema_version", schema_version}, {"command", command}};
}

// Seed precedence: command line, then the config's "seed", then QPVAL_SEED, then 0.
inline mc::RngSpec resolve_rng(std::optional<std::uint64_t> cli_seed, const Json& cfg, const char* env_seed)
{
    mc::RngSpec rng;
    if (cli_seed) rng.seed = *cli_seed;
    else if (cfg.contains("seed")) rng.seed = index_from_json(cfg["seed"], "seed");
    else if (env_seed && *env_seed) {
        try {
            std::size_t used = 0;
            rng.seed = std::stoull(env_seed, &used);
            if (used != std::string(env_seed).size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw InputError(std::string("QPVAL_SEED is not an unsigned integer: '") + env_seed + "'");
        }
    }
    if (cfg.contains("stream")) rng.stream = index_from_json(cfg["stream"], "stream");
    return rng;
}

// Maps library exceptions to exit codes.
inline int guarded(const std::function<int()>& body, std::ostream& err)
{
    try {
        return body();
    } catch (const MarketArbitrageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_market_arbitrage;
    } catch (const InputError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const StructuralError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const CapabilityError& e) {
        err << "unsupported: " << e.what() << '\n';
        return exit_usage;
    } catch (const Json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

inline void write_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

inline std::string csv_number(double x) { return Json(x).dump(); }

// --- reproduce -------------------------------------------------------------------------------

inline Json decimals(const std::vector<Rational>& xs)
{
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(to_decimal_string(x));
    return a;
}

inline int cmd_reproduce(const std::string& id, const std::optional<Rational>& s_opt, std::ostream& out, std::ostream& err)
{
    if (id != "discrete-complete" && id != "discrete-incomplete") {
        err << "unknown example '" << id << "'\nusage: qpval reproduce {discrete-complete|discrete-incomplete} [--s S]\n";
        return exit_usage;
    }
    const bool complete = id == "discrete-complete";
    if (complete && s_opt) {
        err << "--s applies to discrete-incomplete only\n";
        return exit_usage;
    }
    const Rational s = s_opt.value_or(Rational(1, 4));
    if (!complete && (s <= 0 || s >= Rational(1, 2))) {
        err << "--s must lie strictly between 0 and 1/2 so that Q is equivalent\n";
        return exit_usage;
    }

    const auto ex = complete ? finite::three_state_complete() : finite::three_state_incomplete();
    const auto& market = ex.market;
    const auto& pub = market.filtration().terminal();
    const auto poly = finite::martingale_measures(market);
    std::vector<Rational> q;
    if (complete) {
        if (poly.vertices.size() != 1) {
            err << "expected a unique martingale measure, found " << poly.vertices.size() << " vertices\n";
            return exit_failure;
        }
        q = poly.vertices.front();
    } else {
        // The polytope is the segment between the vertices with the smallest and largest mass on
        // the first state; pick the point whose first mass is s.
        auto lo = poly.vertices.front(), hi = lo;
        for (const auto& v : poly.vertices) {
            if (v[0] < lo[0]) lo = v;
            if (v[0] > hi[0]) hi = v;
        }
        if (s > hi[0] || s < lo[0]) {
            err << "s is outside the martingale polytope\n";
            return exit_failure;
        }
        const Rational w = (s - lo[0]) / (hi[0] - lo[0]);
        q.resize(lo.size());
        for (std::size_t i = 0; i < q.size(); ++i) q[i] = (1 - w) * lo[i] + w * hi[i];
    }
    const auto composed = finite::qp_compose(q, market.reference(), pub);
    const Rational ex_payment = finite::qp_expect(ex.payment, q, market.reference(), pub);
    const Rational ex_hybrid = finite::qp_expect(ex.hybrid, q, market.reference(), pub);

    std::vector<Rational> expected_measure;
    const auto ref = complete ? reference::complete_qp_measure() : reference::incomplete_qp_measure(s);
    expected_measure.assign(ref.begin(), ref.end());
    const Rational expected_payment = complete ? reference::complete_payment_value() : reference::incomplete_payment_value(s);

    Json report = report_header("reproduce");
    report["example"] = id;
    if (!complete) report["s"] = to_decimal_string(s);
    report["outcomes"] = ex.space.labels();
    report["martingale_measure"] = decimals(q);
    report["qp_measure"] = decimals(composed.weights());
    report["value_payment"] = to_decimal_string(ex_payment);
    report["value_hybrid"] = to_decimal_string(ex_hybrid);

    Json diff = Json::array();
    if (composed.weights() != expected_measure)
        diff.push_back(Json{{"field", "qp_measure"}, {"expected", decimals(expected_measure)}, {"got", decimals(composed.weights())}});
    if (ex_payment != expected_payment)
        diff.push_back(Json{{"field", "value_payment"}, {"expected", to_decimal_string(expected_payment)}, {"got", to_decimal_string(ex_payment)}});
    if (!complete && ex_hybrid != reference::incomplete_hybrid_value(s))
        diff.push_back(Json{{"field", "value_hybrid"},
                            {"expected", to_decimal_string(reference::incomplete_hybrid_value(s))},
                            {"got", to_decimal_string(ex_hybrid)}});
    report["match"] = diff.empty();
    if (!diff.empty()) report["diff"] = diff;
    write_json(out, report);
    return diff.empty() ? exit_ok : exit_failure;
}

// --- price -----------------------------------------------------------------------------------

struct PriceResult {
    std::string product;
    std::size_t t = 0;
    double value = 0.0;
    std::optional<mc::QPEstimate> estimate; // present for Monte Carlo values
    std::string method;
    Json extra = Json::object();
};

inline PriceResult price_request(const ProductRequest& req, const ModelContext& ctx, const mc::McOptions& opt, mc::RngSpec rng)
{
    PriceResult r;
    r.product = req.name;
    const affine::Vec z = req.z_t ? *req.z_t : ctx.model.initial_state();
    const auto& spec = *req.spec;
    r.t = mc::valuation_time(spec);

    const bool va = std::holds_alternative<products::VASurrenderSpec>(spec);
    const bool affine_available = !va || std::get<products::VASurrenderSpec>(spec).copula.kind() == stopping::CopulaKind::independence;
    const bool use_mc = req.method == Method::monte_carlo || (req.method == Method::automatic && !affine_available);
    if (req.method == Method::affine && !affine_available)
        throw CapabilityError("the affine route for va_surrender needs the independence copula");

    if (const auto* sc = std::get_if<products::ScheduledContract>(&spec)) r.extra["single_premium"] = products::scheduled_to_single(*sc).premium;

    if (use_mc) {
        const auto e = mc::estimate_product(spec, ctx.model, z, opt, rng);
        r.value = e.mean;
        r.estimate = e;
        r.method = "monte_carlo";
        return r;
    }
    r.method = "affine";
    r.value = std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, products::SurrenderOptionSpec>) return products::price_surrender_option(ctx.model, p, z);
            else if constexpr (std::is_same_v<T, products::VASurrenderSpec>) return products::price_va_surrender_affine(ctx.model, p, z);
            else if constexpr (std::is_same_v<T, products::ScheduledContract>) return products::price_scheduled(ctx.model, p, z);
            else return products::price(ctx.model, p, z);
        },
        spec);
    return r;
}

inline void write_price(std::ostream& out, const PriceResult& r, Format format)
{
    if (format == Format::csv) {
        out << "product,t,value,stderr_if_mc,method\n";
        out << r.product << ',' << r.t << ',' << csv_number(r.value) << ',' << (r.estimate ? csv_number(r.estimate->stderr) : "") << ','
            << r.method << '\n';
        return;
    }
    Json j = report_header("price");
    j["product"] = r.product;
    j["t"] = r.t;
    j["value"] = r.value;
    j["method"] = r.method;
    if (r.estimate) {
        j["stderr"] = r.estimate->stderr;
        j["n"] = r.estimate->n;
        j["seed"] = r.estimate->seed;
        j["stream"] = r.estimate->stream;
    }
    for (const auto& [k, v] : r.extra.items()) j[k] = v;
    write_json(out, j);
}

inline void write_longevity(std::ostream& out, const products::MixturePath& path, Format format)
{
    if (format == Format::csv) {
        out << "period,intensity";
        for (std::size_t i = 0; i < path.weights.front().size(); ++i) out << ",weight_" << i;
        out << '\n';
        for (std::size_t t = 0; t < path.weights.size(); ++t) {
            out << t << ',' << (t < path.intensity.size() ? csv_number(path.intensity[t]) : "");
            for (double w : path.weights[t]) out << ',' << csv_number(w);
            out << '\n';
        }
        return;
    }
    Json j = report_header("price");
    j["product"] = "longevity";
    j["method"] = "bayes_update";
    j["weights"] = path.weights;
    j["intensity"] = path.intensity;
    write_json(out, j);
}

inline int cmd_price(const Json& cfg, Format format, mc::RngSpec rng, std::ostream& out, std::ostream& err)
{
    return guarded(
        [&] {
            check_top_level(cfg);
            const auto& pj = require(cfg, "product", "config");
            std::optional<ModelContext> ctx;
            if (cfg.contains("model")) ctx = model_context_from_json(cfg);
            const auto req = product_from_json(pj, ctx ? &*ctx : nullptr);
            if (req.longevity) {
                write_longevity(out, products::mixture_update(req.longevity->mixture, req.longevity->observations), format);
                return int(exit_ok);
            }
            const auto r = price_request(req, *ctx, mc_options_from_json(cfg), rng);
            if (!std::isfinite(r.value)) throw NumericError("product value is not finite");
            write_price(out, r, format);
            return int(exit_ok);
        },
        err);
}

// --- check -----------------------------------------------------------------------------------

inline int cmd_check(const Json& cfg, mc::RngSpec rng, std::ostream& out, std::ostream& err)
{
    return guarded(
        [&] {
            check_top_level(cfg);
            const auto ins = arbitrage::insurance_market_from_json(require(cfg, "market", "config"), require(cfg, "insurance", "config"));
            Json report = report_header("check");
            const auto poly = finite::martingale_measures(ins.market);
            if (poly.empty || !poly.has_equivalent) {
                report["verdict"] = "market_arbitrage";
                report["detail"] = poly.empty ? "no martingale measure" : "no equivalent martingale measure";
                write_json(out, report);
                return int(exit_market_arbitrage);
            }
            const auto nifa = arbitrage::check_nifa(ins, poly);
            if (nifa.status == arbitrage::NifaStatus::certified) {
                report["verdict"] = "nifa";
                report["nifa"] = arbitrage::to_json(nifa);
                write_json(out, report);
                return int(exit_ok);
            }
            const auto cert = arbitrage::check_ifa(ins, poly);
            if (!cert) {
                report["verdict"] = "inconclusive";
                report["nifa"] = arbitrage::to_json(nifa);
                write_json(out, report);
                return int(exit_inconclusive);
            }
            report["verdict"] = "ifa";
            report["certificate"] = arbitrage::to_json(*cert);
            if (cfg.contains("construction")) {
                const Json& c = cfg["construction"];
                require_known_keys(c, {"seekers", "runs"}, "construction");
                const auto seekers = index_from_json(require(c, "seekers", "construction"), "construction.seekers");
                const auto runs = index_from_json(require(c, "runs", "construction"), "construction.runs");
                auto construction = arbitrage::to_json(arbitrage::construct_arbitrage(ins, *cert, seekers, runs, rng));
                construction["seed"] = rng.seed;
                construction["stream"] = rng.stream;
                report["construction"] = std::move(construction);
            }
            write_json(out, report);
            return int(exit_ifa);
        },
        err);
}

// --- validate --------------------------------------------------------------------------------

inline int cmd_validate(const Json& cfg, std::optional<std::size_t> n_override, Format format, mc::RngSpec rng, std::ostream& out,
                        std::ostream& err)
{
    return guarded(
        [&] {
            check_top_level(cfg);
            const auto ctx = model_context_from_json(cfg);
            auto spec = validation_from_json(cfg, ctx);
            if (n_override) spec.n = *n_override;
            if (spec.n < 2) throw InputError("validation needs n >= 2");
            const auto rep = run_validation(ctx, spec, rng);
            if (format == Format::csv) {
                out << "name,closed_form,mc_mean,stderr,z\n";
                for (const auto& c : rep.comparisons)
                    out << c.name << ',' << csv_number(c.closed_form) << ',' << csv_number(c.mc_mean) << ',' << csv_number(c.stderr) << ','
                        << csv_number(c.z) << '\n';
            } else {
                Json j = report_header("validate");
                const Json body = to_json(rep);
                for (const auto& [k, v] : body.items()) j[k] = v;
                j["status"] = rep.underpowered ? "underpowered" : (rep.pass() ? "pass" : "fail");
                write_json(out, j);
            }
            if (rep.underpowered) {
                err << "warning: n = " << spec.n << " is below the minimum of " << spec.min_n << "; the comparison is underpowered\n";
                return int(exit_inconclusive);
            }
            return int(rep.pass() ? exit_ok : exit_failure);
        },
        err);
}

} // namespace qpval::cli
