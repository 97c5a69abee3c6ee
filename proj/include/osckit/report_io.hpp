#pragma once

#include "json.hpp"

#include "osckit/norms.hpp"

namespace osckit {

nlohmann::json to_json(const Arc& arc);
nlohmann::json to_json(const PeriodicRect& rect);
// {norm, value, mode, rect_count, weight_base, argmax:{split?, arcs:[{axis,start,len}]}}
nlohmann::json to_json(const NormReport& report);

NormReport norm_report_from_json(const nlohmann::json& j);

}  // namespace osckit
