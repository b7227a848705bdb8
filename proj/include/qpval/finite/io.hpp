#pragma once

#include <string>
#include <vector>

#include "qpval/core/json.hpp"
#include "qpval/finite/space.hpp"

namespace qpval::finite {

struct FiniteModel {
    OutcomeSpace space;
    Market market;
};

// Reads a random variable given per outcome (array in outcome order) or as a single constant.
inline RandomVariable rv_from_json(const Json& j, std::size_t n, const std::string& what)
{
    if (!j.is_array()) return RandomVariable(n, rational_from_json(j));
    if (j.size() != n) throw InputError("'" + what + "' needs " + std::to_string(n) + " values, got " + std::to_string(j.size()));
    RandomVariable x;
    x.reserve(n);
    for (const auto& v : j) x.push_back(rational_from_json(v));
    return x;
}

inline Json rv_to_json(const RandomVariable& x)
{
    Json arr = Json::array();
    for (const auto& v : x) arr.push_back(rational_to_json(v));
    return arr;
}

// Loads a market object {"outcomes", "P", "partitions", "assets"}; other keys are rejected. "partitions" lists, for
// t = 0..T, the blocks of outcome labels. "assets" is either [asset][time][outcome] or, for a single
// asset, [time][outcome].
inline FiniteModel finite_model_from_json(const Json& cfg)
{
    require_known_keys(cfg, {"outcomes", "P", "partitions", "assets"}, "market");
    OutcomeSpace space(require(cfg, "outcomes", "config").get<std::vector<std::string>>());
    const std::size_t n = space.size();

    Measure p(rv_from_json(require(cfg, "P", "config"), n, "P"));

    const Json& parts = require(cfg, "partitions", "config");
    if (!parts.is_array() || parts.empty()) throw InputError("'partitions' must be a non-empty array");
    std::vector<Partition> partitions;
    for (const auto& pj : parts) {
        std::vector<std::vector<std::size_t>> blocks;
        for (const auto& bj : pj) {
            std::vector<std::size_t> blk;
            for (const auto& lbl : bj) blk.push_back(space.index_of(lbl.get<std::string>()));
            blocks.push_back(std::move(blk));
        }
        partitions.emplace_back(n, std::move(blocks));
    }
    Filtration filt(std::move(partitions));

    const Json& assets = require(cfg, "assets", "config");
    if (!assets.is_array() || assets.empty()) throw InputError("'assets' must be a non-empty array");
    std::vector<Json> per_asset;
    const bool single = assets.front().is_array() && !assets.front().empty() && !assets.front().front().is_array();
    if (single) per_asset.push_back(assets);
    else
        for (const auto& a : assets) per_asset.push_back(a);

    const std::size_t times = filt.horizon() + 1;
    std::vector<std::vector<RandomVariable>> prices(times);
    for (std::size_t k = 0; k < per_asset.size(); ++k) {
        if (!per_asset[k].is_array() || per_asset[k].size() != times)
            throw InputError("asset " + std::to_string(k) + " needs one price vector per time 0.." + std::to_string(times - 1));
        for (std::size_t t = 0; t < times; ++t)
            prices[t].push_back(rv_from_json(per_asset[k][t], n, "assets"));
    }
    return {std::move(space), Market(std::move(filt), std::move(p), std::move(prices))};
}

} // namespace qpval::finite
