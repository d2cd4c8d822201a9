#include "evrel/metrics.hpp"

#include <algorithm>
#include <set>

#include "evrel/error.hpp"

namespace evrel {

using nlohmann::json;

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::kTemporal: return "temporal";
    case RelationKind::kCoreference: return "coref";
    case RelationKind::kCausal: return "causal";
  }
  return "temporal";
}

std::optional<RelationKind> parse_relation_kind(std::string_view text) {
  if (text == "temporal") return RelationKind::kTemporal;
  if (text == "coref" || text == "coreference") return RelationKind::kCoreference;
  if (text == "causal") return RelationKind::kCausal;
  return std::nullopt;
}

json to_json(const AgreementReport& r) {
  json j = {{"kind", std::string(to_string(r.kind))}, {"universe_size", r.universe_size}};
  if (r.kappa) {
    j["observed_agreement"] = *r.observed_agreement;
    j["expected_agreement"] = *r.expected_agreement;
    j["kappa"] = *r.kappa;
  }
  if (r.f1) {
    j["bcubed_precision"] = *r.precision;
    j["bcubed_recall"] = *r.recall;
    j["bcubed_f1"] = *r.f1;
  }
  return j;
}

AgreementReport cohen_kappa(const ItemLabels& a, const ItemLabels& b,
                            const std::vector<std::string>& label_set, RelationKind kind) {
  if (a.empty() && b.empty()) throw Error(ErrorCode::kValidation, "kappa over an empty item universe");
  if (a.size() != b.size() ||
      !std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) { return x.first == y.first; })) {
    throw Error(ErrorCode::kValidation, "annotators labeled different item universes");
  }
  std::map<std::string, double> ma, mb;
  std::size_t same = 0;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (!label_set.empty()) {
      for (const auto* l : {&ia->second, &ib->second}) {
        if (std::find(label_set.begin(), label_set.end(), *l) == label_set.end()) {
          throw Error(ErrorCode::kValidation, "label outside the label set: " + *l);
        }
      }
    }
    ma[ia->second] += 1;
    mb[ib->second] += 1;
    if (ia->second == ib->second) ++same;
  }
  const double total = static_cast<double>(a.size());
  double expected = 0;
  for (const auto& [label, count] : ma) {
    if (auto it = mb.find(label); it != mb.end()) expected += (count / total) * (it->second / total);
  }
  const double observed = static_cast<double>(same) / total;
  AgreementReport r;
  r.kind = kind;
  r.universe_size = a.size();
  r.observed_agreement = observed;
  r.expected_agreement = expected;
  // p_e == 1 forces p_o == 1: both annotators used one identical label
  r.kappa = expected >= 1.0 ? 1.0 : (observed - expected) / (1.0 - expected);
  return r;
}

AgreementReport cohen_kappa(std::span<const std::string> a, std::span<const std::string> b, RelationKind kind) {
  if (a.size() != b.size()) throw Error(ErrorCode::kValidation, "label vectors differ in length");
  ItemLabels la, lb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    // zero-padded so map order equals position order
    std::string key = std::to_string(i);
    key.insert(0, 12 - std::min<std::size_t>(12, key.size()), '0');
    la[key] = a[i];
    lb[key] = b[i];
  }
  return cohen_kappa(la, lb, {}, kind);
}

AgreementReport bcubed_f1(const Partition& system, const Partition& reference) {
  std::map<std::string, const std::vector<std::string>*> sys_of, ref_of;
  for (const auto& c : system) {
    for (const auto& m : c) {
      if (!sys_of.emplace(m, &c).second) throw Error(ErrorCode::kValidation, "mention " + m + " in two clusters");
    }
  }
  for (const auto& c : reference) {
    for (const auto& m : c) {
      if (!ref_of.emplace(m, &c).second) throw Error(ErrorCode::kValidation, "mention " + m + " in two clusters");
    }
  }
  if (sys_of.size() != ref_of.size() ||
      !std::equal(sys_of.begin(), sys_of.end(), ref_of.begin(),
                  [](const auto& x, const auto& y) { return x.first == y.first; })) {
    throw Error(ErrorCode::kValidation, "partitions cover different mention sets");
  }
  if (sys_of.empty()) throw Error(ErrorCode::kValidation, "B-Cubed over an empty mention set");
  double precision = 0, recall = 0;
  for (const auto& [mention, sys] : sys_of) {
    const auto* ref = ref_of[mention];
    const std::set<std::string> in_ref(ref->begin(), ref->end());
    const auto overlap = static_cast<double>(
        std::count_if(sys->begin(), sys->end(), [&](const auto& x) { return in_ref.count(x) > 0; }));
    precision += overlap / static_cast<double>(sys->size());
    recall += overlap / static_cast<double>(ref->size());
  }
  const double n = static_cast<double>(sys_of.size());
  AgreementReport r;
  r.kind = RelationKind::kCoreference;
  r.universe_size = sys_of.size();
  r.precision = precision / n;
  r.recall = recall / n;
  r.f1 = 2 * *r.precision * *r.recall / (*r.precision + *r.recall);
  return r;
}

json to_json(const PhaseWorkload& w) {
  return {{"manual_steps", w.manual_steps},
          {"auto_steps", w.auto_steps},
          {"total_pairs", w.total_pairs},
          {"reduction", w.reduction}};
}

json to_json(const WorkloadReport& w) {
  return {{"temporal", to_json(w.temporal)},
          {"coreference", to_json(w.coreference)},
          {"causal", to_json(w.causal)}};
}

PhaseWorkload phase_workload(std::span<const double> manual_steps, double total_pairs, double auto_steps) {
  if (total_pairs <= 0) throw Error(ErrorCode::kValidation, "workload needs a positive pair count");
  if (manual_steps.empty()) throw Error(ErrorCode::kValidation, "workload needs at least one annotator");
  double sum = 0;
  for (double s : manual_steps) sum += s;
  PhaseWorkload w;
  w.manual_steps = sum / static_cast<double>(manual_steps.size());
  w.auto_steps = auto_steps;
  w.total_pairs = total_pairs;
  w.reduction = std::clamp(1.0 - w.manual_steps / total_pairs, 0.0, 1.0);
  return w;
}

WorkloadReport workload_report(std::span<const ExportedAnnotation> exports) {
  if (exports.empty()) throw Error(ErrorCode::kValidation, "workload report needs at least one export");
  WorkloadReport report;
  auto fill = [&](const char* phase, PhaseWorkload& out) {
    std::vector<double> manual;
    double total = 0, automatic = 0;
    for (const auto& e : exports) {
      const json& s = e.stats.value(phase, json::object());
      manual.push_back(s.value("manual_steps", 0.0));
      automatic += s.value("auto_steps", 0.0);
      total += s.value("total_pairs", 0.0);
    }
    const double count = static_cast<double>(exports.size());
    out = phase_workload(manual, total / count, automatic / count);
  };
  fill("temporal", report.temporal);
  fill("coreference", report.coreference);
  fill("causal", report.causal);
  return report;
}

namespace {

void require_same_mentions(const ExportedAnnotation& a, const ExportedAnnotation& b) {
  if (a.doc_id != b.doc_id) throw Error(ErrorCode::kValidation, "exports cover different documents");
  if (a.mentions != b.mentions) throw Error(ErrorCode::kValidation, "exports cover different mention sets");
}

std::map<std::set<std::string>, std::string> clusters_by_members(const ExportedAnnotation& e) {
  std::map<std::set<std::string>, std::string> out;
  for (const auto& c : e.clusters) out[{c.begin(), c.end()}] = c.front();
  return out;
}

std::optional<TemporalLabel> cluster_label(const ExportedAnnotation& e, const std::string& x, const std::string& y) {
  if (auto it = e.cluster_labels.find({x, y}); it != e.cluster_labels.end()) return it->second;
  if (auto it = e.cluster_labels.find({y, x}); it != e.cluster_labels.end()) return invert(it->second);
  return std::nullopt;
}

}  // namespace

PairUniverse build_pair_universe(const ExportedAnnotation& a, const ExportedAnnotation& b, RelationKind kind,
                                 CausalUniverse causal) {
  require_same_mentions(a, b);
  PairUniverse u;
  switch (kind) {
    case RelationKind::kTemporal:
      for (const auto& [key, label] : a.mention_labels) {
        const std::string item = key.first + "|" + key.second;
        u.labels_a[item] = std::string(to_string(label));
        u.labels_b[item] = std::string(to_string(b.label(key.first, key.second).value()));
      }
      break;
    case RelationKind::kCausal: {
      const auto in_b = clusters_by_members(b);
      // clusters formed identically by both annotators, text order of representative
      std::vector<std::pair<std::string, std::string>> shared;
      for (const auto& c : a.clusters) {
        auto it = in_b.find({c.begin(), c.end()});
        if (it != in_b.end()) shared.emplace_back(c.front(), it->second);
      }
      for (const auto& [xa, xb] : shared) {
        for (const auto& [ya, yb] : shared) {
          if (xa == ya) continue;
          const bool before_a = cluster_label(a, xa, ya) == TemporalLabel::kBefore;
          const bool before_b = cluster_label(b, xb, yb) == TemporalLabel::kBefore;
          if (causal == CausalUniverse::kBeforeBoth && !(before_a && before_b)) continue;
          const std::string item = xa + "->" + ya;
          u.labels_a[item] = a.causal.count({xa, ya}) ? "cause" : "none";
          u.labels_b[item] = b.causal.count({xb, yb}) ? "cause" : "none";
        }
      }
      break;
    }
    case RelationKind::kCoreference:
      throw Error(ErrorCode::kValidation, "coreference agreement is computed over partitions, not pairs");
  }
  return u;
}

AgreementReport agreement(const ExportedAnnotation& a, const ExportedAnnotation& b, RelationKind kind,
                          CausalUniverse causal) {
  if (kind == RelationKind::kCoreference) {
    require_same_mentions(a, b);
    return bcubed_f1(a.clusters, b.clusters);
  }
  auto u = build_pair_universe(a, b, kind, causal);
  return cohen_kappa(u.labels_a, u.labels_b, {}, kind);
}

PairwiseAgreement pairwise_agreement(std::span<const ExportedAnnotation> exports, RelationKind kind,
                                     CausalUniverse causal) {
  if (exports.size() < 2) throw Error(ErrorCode::kValidation, "agreement needs at least two exports");
  PairwiseAgreement out;
  double sum = 0;
  for (std::size_t i = 0; i < exports.size(); ++i) {
    for (std::size_t j = i + 1; j < exports.size(); ++j) {
      auto r = agreement(exports[i], exports[j], kind, causal);
      sum += kind == RelationKind::kCoreference ? *r.f1 : *r.kappa;
      out.pairs.push_back({{i, j}, r});
    }
  }
  out.average = sum / static_cast<double>(out.pairs.size());
  return out;
}

}  // namespace evrel
