#pragma once

#include <json.hpp>

#include <initializer_list>
#include <set>
#include <string>

#include "qpval/core/error.hpp"
#include "qpval/core/rational.hpp"

namespace qpval {

using Json = nlohmann::ordered_json;

// Strings are parsed as "num/den" or exact decimals; JSON numbers via their shortest decimal text.
inline Rational rational_from_json(const Json& j)
{
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return parse_rational(j.dump());
    throw InputError("expected a rational value, got " + j.dump());
}

inline Json rational_to_json(const Rational& r) { return to_string(r); }

inline double number_from_json(const Json& j, const std::string& what)
{
    if (!j.is_number()) throw InputError("'" + what + "' must be a number");
    return j.get<double>();
}

// Rejects keys outside the allowed set; silent typos in pricing configs are fatal.
inline void require_known_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!obj.is_object()) throw InputError("'" + where + "' must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items())
        if (!ok.count(key)) throw InputError("unknown key '" + key + "' in " + where);
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& where)
{
    if (!obj.contains(key)) throw InputError("missing key '" + key + "' in " + where);
    return obj.at(key);
}

} // namespace qpval
