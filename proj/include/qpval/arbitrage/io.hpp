#pragma once

#include "qpval/arbitrage/construct.hpp"
#include "qpval/arbitrage/slln.hpp"
#include "qpval/arbitrage/theorem.hpp"
#include "qpval/core/json.hpp"
#include "qpval/finite/io.hpp"

namespace qpval::arbitrage {

// {"contracts": [{"t": 0, "benefit": values, "premium": values}, ...]}; values are per outcome or a
// constant.
inline std::vector<IssueContract> contracts_from_json(const Json& j, std::size_t outcomes)
{
    require_known_keys(j, {"contracts"}, "insurance");
    const Json& list = require(j, "contracts", "insurance");
    if (!list.is_array() || list.empty()) throw InputError("'contracts' must be a non-empty array");
    std::vector<IssueContract> out;
    for (std::size_t k = 0; k < list.size(); ++k) {
        const auto where = "contract " + std::to_string(k);
        require_known_keys(list[k], {"t", "benefit", "premium"}, where);
        const Json& t = require(list[k], "t", where);
        if (!t.is_number_unsigned()) throw InputError("'t' in " + where + " must be a non-negative integer");
        out.push_back({t.get<std::size_t>(), finite::rv_from_json(require(list[k], "benefit", where), outcomes, "benefit"),
                       finite::rv_from_json(require(list[k], "premium", where), outcomes, "premium")});
    }
    return out;
}

inline InsuranceMarket insurance_market_from_json(const Json& market, const Json& insurance)
{
    auto fm = finite::finite_model_from_json(market);
    InsuranceMarket ins{std::move(fm.market), contracts_from_json(insurance, fm.space.size())};
    ins.validate();
    return ins;
}

inline Json rationals_to_json(const std::vector<Rational>& xs)
{
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(rational_to_json(x));
    return a;
}

inline Json to_json(const NifaResult& r)
{
    Json j;
    j["status"] = r.status == NifaStatus::certified ? "nifa_certified" : "inconclusive";
    j["candidates_tried"] = r.candidates;
    if (r.status == NifaStatus::certified) j["witness_q"] = rationals_to_json(r.witness);
    return j;
}

inline Json to_json(const IfaCertificate& c)
{
    Json j;
    j["contract"] = c.contract;
    j["t"] = c.t;
    j["trigger_blocks"] = c.trigger_blocks;
    j["trigger_probability"] = rational_to_json(c.trigger_probability);
    j["premium_floor"] = rationals_to_json(c.premium_floor);
    j["superhedge_price"] = rationals_to_json(c.superhedge);
    j["replicable"] = c.replicable;
    Json strat = Json::array();
    for (const auto& per_time : c.strategy) {
        Json blocks = Json::array();
        for (const auto& pos : per_time) blocks.push_back(rationals_to_json(pos));
        strat.push_back(std::move(blocks));
    }
    j["strategy"] = std::move(strat);
    return j;
}

inline Json to_json(const ConstructionReport& r)
{
    return Json{{"seekers", r.seekers},
                {"runs", r.runs},
                {"min", r.min},
                {"mean", r.mean},
                {"stderr", r.stderr},
                {"positive_fraction", r.positive_fraction},
                {"trigger_probability", r.trigger_probability},
                {"max_conditional_variance", r.max_conditional_variance},
                {"noise_band", r.noise_band}};
}

inline Json to_json(const SllnReport& r)
{
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back(Json{{"n", row.n}, {"rms_error", row.rms_error}, {"reference", row.reference}});
    Json j{{"rows", std::move(rows)}};
    j["exponent"] = r.exponent ? Json(*r.exponent) : Json(nullptr);
    j["r_squared"] = r.r_squared ? Json(*r.r_squared) : Json(nullptr);
    return j;
}

} // namespace qpval::arbitrage
