#include "jform/io.hpp"

#include <string>
#include <vector>

#include "jform/errors.hpp"
#include "jform/forms.hpp"

namespace jform {

namespace {

Rational parse_rat(const ordered_json& j, const char* where) {
    if (!j.is_string())
        throw std::invalid_argument(std::string(where) + ": coefficients must be strings");
    try {
        return Rational::parse(j.get<std::string>());
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(where) + ": malformed rational '" +
                                    j.get<std::string>() + "'");
    }
}

ordered_json coeff_strings(const std::vector<Rational>& v) {
    ordered_json arr = ordered_json::array();
    for (const auto& x : v) arr.push_back(x.str());
    return arr;
}

std::vector<Rational> coeff_vector(const ordered_json& j, const char* where) {
    if (!j.is_array())
        throw std::invalid_argument(std::string(where) + ": expected an array");
    std::vector<Rational> out;
    for (const auto& e : j) out.push_back(parse_rat(e, where));
    return out;
}

long require_int(const ordered_json& j, const char* where) {
    if (!j.is_number_integer())
        throw std::invalid_argument(std::string(where) + ": expected an integer");
    return j.get<long>();
}

const ordered_json& require_key(const ordered_json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end())
        throw std::invalid_argument(std::string("missing key '") + key + "'");
    return *it;
}

}  // namespace

ordered_json series_to_json(const FourierSeries& s) {
    ordered_json j;
    j["qden"] = 24;
    j["zden"] = 2;
    j["qtrunc"] = s.qtrunc();
    ordered_json coeffs = ordered_json::array();
    for (const auto& [key, v] : s.coeffs())
        coeffs.push_back(ordered_json::array({key.first, key.second, v.str()}));
    j["coeffs"] = std::move(coeffs);
    return j;
}

FourierSeries series_from_json(const ordered_json& j) {
    if (!j.is_object()) throw std::invalid_argument("series: expected an object");
    if (require_int(require_key(j, "qden"), "series.qden") != 24 ||
        require_int(require_key(j, "zden"), "series.zden") != 2)
        throw std::invalid_argument("series: unsupported exponent denominators");
    FourierSeries s(require_int(require_key(j, "qtrunc"), "series.qtrunc"));
    for (const auto& e : require_key(j, "coeffs")) {
        if (!e.is_array() || e.size() != 3)
            throw std::invalid_argument("series.coeffs: expected [n24, l2, \"p/q\"] triples");
        s.set(require_int(e[0], "series.coeffs"), require_int(e[1], "series.coeffs"),
              parse_rat(e[2], "series.coeffs"));
    }
    return s;
}

ordered_json mde_to_json(const MDE& mde) {
    if (mde.weight2 % 2 != 0)
        throw std::invalid_argument("mde_to_json: weight is not integral");
    ordered_json j;
    j["weight"] = mde.weight2 / 2;
    j["index"] = Rational(mde.index2, 2).str();
    j["order"] = mde.order;
    ordered_json lead;
    lead["weight"] = mde.leading.weight;
    lead["coeffs"] = coeff_strings(mde.leading.coords);
    j["leading"] = std::move(lead);
    ordered_json slots = ordered_json::array();
    for (size_t i = 0; i < mde.coeffs.size(); ++i) {
        ordered_json c;
        c["t"] = mde.order - 1 - static_cast<int>(i);
        c["weight"] = mde.coeffs[i].weight;
        c["coeffs"] = coeff_strings(mde.coeffs[i].coords);
        slots.push_back(std::move(c));
    }
    j["coeffs"] = std::move(slots);
    if (mde.form_coords) {
        ordered_json f;
        f["basis"] = "paper-index3";
        f["coords"] = ordered_json::array({(*mde.form_coords)[0].str(),
                                           (*mde.form_coords)[1].str(),
                                           (*mde.form_coords)[2].str()});
        j["form"] = std::move(f);
    }
    if (mde.certificate) {
        ordered_json c;
        c["checked_q_orders"] = mde.certificate->checked_q_orders;
        c["ambient_weight"] = mde.certificate->ambient_weight;
        j["certificate"] = std::move(c);
    }
    return j;
}

MDE mde_from_json(const ordered_json& j) {
    if (!j.is_object()) throw std::invalid_argument("mde: expected an object");
    MDE mde;
    mde.weight2 = 2 * static_cast<int>(require_int(require_key(j, "weight"), "mde.weight"));
    const auto& idx = require_key(j, "index");
    if (!idx.is_string()) throw std::invalid_argument("mde.index: expected a string");
    const Rational index = Rational::parse(idx.get<std::string>());
    const Rational index2 = index * Rational(2);
    if (!index2.is_integer() || index2.sign() <= 0)
        throw std::invalid_argument("mde.index: expected a positive half-integer");
    mde.index2 = static_cast<int>(index2.num().get_si());
    mde.order = static_cast<int>(require_int(require_key(j, "order"), "mde.order"));
    if (mde.order < 1) throw std::invalid_argument("mde.order: must be positive");
    const auto& lead = require_key(j, "leading");
    mde.leading.weight =
        static_cast<int>(require_int(require_key(lead, "weight"), "mde.leading.weight"));
    mde.leading.coords = coeff_vector(require_key(lead, "coeffs"), "mde.leading.coeffs");
    const auto& slots = require_key(j, "coeffs");
    if (!slots.is_array()) throw std::invalid_argument("mde.coeffs: expected an array");
    if (slots.size() != static_cast<size_t>(mde.order))
        throw std::invalid_argument("mde.coeffs: expected one entry per order below the top");
    int expect_t = mde.order - 1;
    for (const auto& s : slots) {
        if (require_int(require_key(s, "t"), "mde.coeffs.t") != expect_t)
            throw std::invalid_argument("mde.coeffs: slots must descend from t = order-1 to 0");
        --expect_t;
        ModularCoeff mc;
        mc.weight = static_cast<int>(require_int(require_key(s, "weight"), "mde.coeffs.weight"));
        mc.coords = coeff_vector(require_key(s, "coeffs"), "mde.coeffs.coeffs");
        if (modular_basis(mc.weight).size() != mc.coords.size())
            throw std::invalid_argument("mde.coeffs: coefficient vector does not match the "
                                        "basis dimension at weight " +
                                        std::to_string(mc.weight));
        mde.coeffs.push_back(std::move(mc));
    }
    if (modular_basis(mde.leading.weight).size() != mde.leading.coords.size())
        throw std::invalid_argument("mde.leading: coefficient vector does not match the basis");
    if (j.contains("form")) {
        const auto& f = j["form"];
        const auto& basis = require_key(f, "basis");
        if (!basis.is_string() || basis.get<std::string>() != "paper-index3")
            throw std::invalid_argument("mde.form.basis: only 'paper-index3' is supported");
        const auto coords = coeff_vector(require_key(f, "coords"), "mde.form.coords");
        if (coords.size() != 3)
            throw std::invalid_argument("mde.form.coords: expected three coordinates");
        mde.form_coords = std::array<Rational, 3>{coords[0], coords[1], coords[2]};
    }
    if (j.contains("certificate")) {
        const auto& c = j["certificate"];
        Certificate cert;
        cert.checked_q_orders = static_cast<int>(
            require_int(require_key(c, "checked_q_orders"), "mde.certificate.checked_q_orders"));
        cert.ambient_weight = static_cast<int>(
            require_int(require_key(c, "ambient_weight"), "mde.certificate.ambient_weight"));
        cert.index2 = mde.index2;
        mde.certificate = cert;
    }
    return mde;
}

ordered_json cubic_to_json(const MPoly& cubic) {
    ordered_json j;
    j["vars"] = ordered_json::array({"a", "b", "c"});
    ordered_json terms = ordered_json::array();
    for (const auto& [m, co] : cubic.terms())
        terms.push_back(ordered_json::array({m.e[0], m.e[1], m.e[2], co.str()}));
    j["terms"] = std::move(terms);
    return j;
}

}  // namespace jform
