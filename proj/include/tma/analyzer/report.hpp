#pragma once

#include "tma/analyzer/analyzer.hpp"

#include <nlohmann/json.hpp>

namespace tma {

/// Labels in id order, `fin` excluded, `end` last.
inline std::vector<Label> report_labels(const Program& program) {
  std::vector<Label> out;
  for (std::uint32_t k = 0; k < program.labels().size(); ++k) {
    const Label l{k};
    if (l != kEnd && l != kFin) out.push_back(l);
  }
  out.push_back(kEnd);
  return out;
}

template <AbstractDomain D>
nlohmann::ordered_json configuration_json(const Configuration<typename D::Store>& q,
                                          const Program& program, const D& domain) {
  nlohmann::ordered_json labels = nlohmann::ordered_json::array();
  for (auto l : q.encountered.elements()) labels.push_back(program.label_name(l));
  nlohmann::ordered_json guarantee = nlohmann::ordered_json::object();
  guarantee["fin"] = domain.render(q.guarantee.at(kFin.id));
  for (std::uint32_t k = 0; k < q.guarantee.size(); ++k) {
    const Label l{k};
    if (l == kFin || domain.leq(q.guarantee[k], domain.bottom())) continue;
    guarantee[program.label_name(l)] = domain.render(q.guarantee[k]);
  }
  return {{"C", domain.render(q.current)},
          {"L", labels},
          {"K", guarantee},
          {"I", domain.render(q.interference)}};
}

template <AbstractDomain D>
nlohmann::ordered_json to_json(const AnalysisResult<typename D::Store>& r,
                               const Program& program, const D& domain) {
  nlohmann::ordered_json per_label = nlohmann::ordered_json::object();
  for (auto l : report_labels(program)) {
    per_label[program.label_name(l)] = domain.render(r.per_label.at(l.id));
  }
  return {{"final", configuration_json(r.final_config, program, domain)},
          {"perLabel", per_label},
          {"passes", r.passes},
          {"transferCount", r.transfer_count}};
}

}  // namespace tma
