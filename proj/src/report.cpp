#include "fairseg/report.hpp"

#include <sstream>

#include "fairseg/errors.hpp"
#include "fairseg/format.hpp"
#include "fairseg/metrics.hpp"
#include "fairseg/perturb.hpp"
#include "fairseg/rng.hpp"

namespace fairseg {

void ensure_class_match(const ModelParams& params, int dataset_classes) {
  if (params.num_classes != dataset_classes)
    throw CheckpointError("arch mismatch: checkpoint has " +
                          std::to_string(params.num_classes) + " classes, dataset has " +
                          std::to_string(dataset_classes));
}

namespace {

struct MeanScores {
  double miou = 0.0;
  double dice = 0.0;
};

MeanScores mean_scores(const ModelParams& params,
                       const std::vector<DatasetRecord>& data,
                       const PerturbSpec* spec, uint64_t sample_domain) {
  MeanScores out;
  for (size_t i = 0; i < data.size(); ++i) {
    const DatasetRecord& rec = data[i];
    MaskTensor pred;
    if (spec == nullptr) {
      pred = predict(params, rec.image);
    } else {
      PerturbSpec s = *spec;
      s.seed = Rng::substream_seed(sample_domain, i);
      pred = predict(params, apply_perturbation(rec.image, s));
    }
    const ClasswiseReport rep = miou(pred, rec.mask);
    out.miou += rep.miou;
    out.dice += rep.dice;
  }
  const auto n = static_cast<double>(data.size());
  out.miou /= n;
  out.dice /= n;
  return out;
}

}  // namespace

std::vector<EvalRow> perturbation_sweep(const ModelParams& params,
                                        const std::vector<DatasetRecord>& data,
                                        const std::vector<double>& severities,
                                        uint64_t seed) {
  if (data.empty()) throw EvalError("evaluation dataset is empty");
  if (severities.empty()) throw ConfigError("severity list must not be empty");
  ensure_class_match(params, data[0].mask.num_classes);

  std::vector<EvalRow> rows;
  const MeanScores clean = mean_scores(params, data, nullptr, 0);
  rows.push_back({"clean", 0.0, clean.miou, clean.dice, 0.0});

  const auto& kinds = all_perturb_kinds();
  for (size_t ki = 0; ki < kinds.size(); ++ki) {
    const uint64_t kind_domain = Rng::substream_seed(seed, ki + 1);
    for (size_t si = 0; si < severities.size(); ++si) {
      PerturbSpec spec;
      spec.kind = kinds[ki];
      spec.severity = severities[si];
      const uint64_t sample_domain = Rng::substream_seed(kind_domain, si);
      const MeanScores s = mean_scores(params, data, &spec, sample_domain);
      rows.push_back({to_string(kinds[ki]), severities[si], s.miou, s.dice,
                      robustness_degradation(clean.miou, s.miou)});
    }
  }
  return rows;
}

std::vector<FairnessRow> fairness_report(const ModelParams& params,
                                         const std::vector<DatasetRecord>& data,
                                         const std::vector<std::string>& attributes) {
  if (data.empty()) throw EvalError("evaluation dataset is empty");
  ensure_class_match(params, data[0].mask.num_classes);
  const std::vector<std::string> names =
      attributes.empty() ? attribute_names(data[0].attributes) : attributes;
  if (names.empty()) throw EvalError("dataset has no attributes to report on");

  std::vector<MaskTensor> preds, gts;
  std::vector<AttributeRecord> attrs;
  preds.reserve(data.size());
  for (const DatasetRecord& rec : data) {
    preds.push_back(predict(params, rec.image));
    gts.push_back(rec.mask);
    attrs.push_back(rec.attributes);
  }

  std::vector<FairnessRow> rows;
  for (const std::string& name : names) {
    if (data[0].attributes.value_of(name) < 0) {
      std::string known;
      for (const std::string& n : attribute_names(data[0].attributes))
        known += (known.empty() ? "" : ", ") + n;
      throw EvalError("unknown attribute `" + name + "` (available: " + known + ")");
    }
    const GroupReport g = per_group_miou(preds, gts, attrs, name);
    FairnessRow row;
    row.attribute = g.attribute;
    row.miou_when_0 = g.miou_when_0;
    row.miou_when_1 = g.miou_when_1;
    row.gap = g.gap;
    row.count0 = g.count0;
    row.count1 = g.count1;
    row.single_group = g.single_group;
    std::vector<double> scores;
    if (g.miou_when_0) scores.push_back(*g.miou_when_0);
    if (g.miou_when_1) scores.push_back(*g.miou_when_1);
    row.variance = fairness_variance(scores);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string eval_csv(const std::vector<EvalRow>& rows) {
  std::ostringstream out;
  out << "kind,severity,miou,dice,degradation\n";
  for (const EvalRow& r : rows)
    out << r.kind << "," << format_double(r.severity) << "," << format_double(r.miou) << ","
        << format_double(r.dice) << "," << format_double(r.degradation) << "\n";
  return out.str();
}

std::string fairness_csv(const std::vector<FairnessRow>& rows) {
  std::ostringstream out;
  out << "attribute,miou_when_0,miou_when_1,gap,variance,count_0,count_1,flag\n";
  for (const FairnessRow& r : rows) {
    out << r.attribute << ",";
    out << (r.miou_when_0 ? format_double(*r.miou_when_0) : "") << ",";
    out << (r.miou_when_1 ? format_double(*r.miou_when_1) : "") << ",";
    out << format_double(r.gap) << "," << format_double(r.variance) << ",";
    out << r.count0 << "," << r.count1 << ",";
    out << (r.single_group ? "single_group" : "") << "\n";
  }
  return out.str();
}

std::string schedule_csv(const std::vector<ScheduleWeights>& rows) {
  std::ostringstream out;
  out << "t,alpha,beta,gamma\n";
  for (size_t t = 0; t < rows.size(); ++t)
    out << t << "," << format_double(rows[t].alpha) << "," << format_double(rows[t].beta)
        << "," << format_double(rows[t].gamma) << "\n";
  return out.str();
}

std::string train_log_csv(const std::vector<EpochLogRow>& rows) {
  std::ostringstream out;
  out << "epoch,alpha,beta,gamma,mean_l_acc,mean_l_rob,mean_l_fair,mean_l_total,"
         "train_miou,wall_ms\n";
  for (const EpochLogRow& r : rows)
    out << r.epoch << "," << format_double(r.alpha) << "," << format_double(r.beta) << ","
        << format_double(r.gamma) << "," << format_double(r.mean_l_acc) << ","
        << format_double(r.mean_l_rob) << "," << format_double(r.mean_l_fair) << ","
        << format_double(r.mean_l_total) << "," << format_double(r.train_miou) << ","
        << format_double(r.wall_ms) << "\n";
  return out.str();
}

}  // namespace fairseg
