#include "osckit/report_io.hpp"

namespace osckit {

nlohmann::json to_json(const Arc& arc) {
  return {{"axis", arc.axis}, {"start", arc.start}, {"len", arc.len}};
}

nlohmann::json to_json(const PeriodicRect& rect) {
  nlohmann::json arcs = nlohmann::json::array();
  for (const Arc& a : rect.arcs) arcs.push_back(to_json(a));
  return arcs;
}

nlohmann::json to_json(const NormReport& report) {
  nlohmann::json argmax = {{"arcs", to_json(report.argmax_rect)}};
  if (report.argmax_split) argmax["split"] = report.argmax_split->averaged_axes();
  return {{"norm", std::string(to_string(report.norm))},
          {"value", report.value},
          {"mode", std::string(to_string(report.mode))},
          {"rect_count", report.rect_count},
          {"weight_base", report.weight_base},
          {"argmax", argmax}};
}

NormReport norm_report_from_json(const nlohmann::json& j) {
  try {
    NormReport r;
    r.norm = parse_norm(j.at("norm").get<std::string>());
    r.value = j.at("value").get<double>();
    r.mode = parse_mode(j.at("mode").get<std::string>());
    r.rect_count = j.at("rect_count").get<std::uint64_t>();
    r.weight_base = j.value("weight_base", 2);
    const auto& argmax = j.at("argmax");
    std::vector<Arc> arcs;
    for (const auto& a : argmax.at("arcs"))
      arcs.push_back(Arc{a.at("axis").get<std::size_t>(), a.at("start").get<std::size_t>(),
                         a.at("len").get<std::size_t>()});
    r.argmax_rect = PeriodicRect(std::move(arcs));
    if (argmax.contains("split"))
      r.argmax_split = CoordSplit(argmax.at("split").get<std::vector<std::size_t>>(), r.argmax_rect.arcs.size());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad norm report: ") + e.what());
  }
}

}  // namespace osckit
