#pragma once

#include <json.hpp>

#include "jform/heat.hpp"
#include "jform/mpoly.hpp"
#include "jform/series.hpp"

namespace jform {

using ordered_json = nlohmann::ordered_json;

// {"qden":24,"zden":2,"qtrunc":N,"coeffs":[[n24,l2,"p/q"],...]} sorted by (n24, l2)
ordered_json series_to_json(const FourierSeries& s);
FourierSeries series_from_json(const ordered_json& j);

// {"weight":...,"index":"...","order":...,"leading":{...},"coeffs":[{"t":...,
//  "weight":...,"coeffs":[...]},...],"form":{...}?,"certificate":{...}?}
// with the slot list ordered by descending t and coefficient vectors over the
// canonical one-monomial-per-Delta-power basis of each weight.
ordered_json mde_to_json(const MDE& mde);
MDE mde_from_json(const ordered_json& j);

// {"vars":["a","b","c"],"terms":[[ea,eb,ec,"coeff"],...]} in graded-lex order
ordered_json cubic_to_json(const MPoly& cubic);

}  // namespace jform
