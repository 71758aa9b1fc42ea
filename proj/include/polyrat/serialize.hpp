#pragma once

#include <json.hpp>

#include "polyrat/poly.hpp"

namespace polyrat {

/// Wire format for coefficient tables: {"bound": [n_1,...],
/// "coeffs": [{"alpha": [...], "re": x, "im": y}, ...]}, zeros omitted.
inline nlohmann::json poly_to_json(const TruncatedPoly& p)
{
    nlohmann::json j;
    j["bound"] = p.box.bound();
    nlohmann::json arr = nlohmann::json::array();
    for (int k = 0; k < p.box.size(); ++k) {
        if (p.coeffs[k] == Complex(0))
            continue;
        arr.push_back({{"alpha", p.box.at(k)},
                       {"re", p.coeffs[k].real()},
                       {"im", p.coeffs[k].imag()}});
    }
    j["coeffs"] = std::move(arr);
    return j;
}

inline TruncatedPoly poly_from_json(const nlohmann::json& j)
{
    TruncatedPoly p(MultiIndexBox(j.at("bound").get<MultiIndex>()));
    for (const auto& e : j.at("coeffs")) {
        p.set(e.at("alpha").get<MultiIndex>(),
              Complex(e.at("re").get<double>(), e.value("im", 0.0)));
    }
    return p;
}

inline nlohmann::json table_to_json(const FourierTable& t)
{
    nlohmann::json j = poly_to_json(TruncatedPoly(t.box, t.coeffs));
    j["trunc_error_estimate"] = t.trunc_error_estimate;
    return j;
}

inline FourierTable table_from_json(const nlohmann::json& j)
{
    TruncatedPoly p = poly_from_json(j);
    return FourierTable(p.box, std::move(p.coeffs), j.value("trunc_error_estimate", 0.0));
}

inline nlohmann::json complex_to_json(Complex c)
{
    return {{"re", c.real()}, {"im", c.imag()}};
}

inline Complex complex_from_json(const nlohmann::json& j)
{
    if (j.is_number())
        return Complex(j.get<double>(), 0.0);
    return Complex(j.at("re").get<double>(), j.value("im", 0.0));
}

} // namespace polyrat
