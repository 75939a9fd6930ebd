#include "imbboost/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "imbboost/csv.hpp"
#include "imbboost/error.hpp"
#include "imbboost/model_io.hpp"

namespace imbboost::harness {

namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) { return prep::format_number(v); }
std::string score(const metrics::Score& s) { return s ? num(*s) : ""; }
std::string fixed(double v, int decimals = 2) { return metrics::format_score(v, decimals); }

std::string percent(double fraction) {
  const double p = fraction * 100.0;
  std::ostringstream s;
  s << p;
  return s.str() + "%";
}

std::string size_label(std::size_t n) {
  if (n >= 1000 && n % 1000 == 0) return std::to_string(n / 1000) + "K";
  return std::to_string(n);
}

std::string param_label(const ObjectiveRow& r) {
  if (!r.parameter) return r.family;
  return r.family + (r.family == "focal" ? " gamma=" : " alpha=") + num(*r.parameter);
}

Json curve_json(const metrics::PRCurve& c) {
  Json pts = Json::array();
  for (const auto& p : c.points) pts.push_back({p.recall, p.precision});
  return {{"auc", c.auc}, {"points", pts}};
}

void write_text(const std::filesystem::path& path, const std::string& text, std::vector<std::filesystem::path>& out) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("unwritable directory: cannot create " + path.string());
  f << text;
  if (!f) throw Error("write failed: " + path.string());
  out.push_back(path);
}

std::string slug(std::string s) {
  for (char& c : s) {
    if (c == '+' || c == ' ' || c == '=') c = '_';
  }
  return s;
}

}  // namespace

std::string mean_std(double mean, double std, int decimals) {
  return fixed(mean, decimals) + " (" + fixed(std, decimals) + ")";
}

std::string grid_csv(const std::vector<GridCell>& cells) {
  std::ostringstream out;
  out << "size,distribution,approach,f1_mean,f1_std,baseline_prc\n";
  for (const auto& c : cells) {
    out << c.size << ',' << num(c.distribution) << ',' << to_string(c.approach) << ',' << num(c.f1_mean) << ','
        << num(c.f1_std) << ',' << num(c.baseline_prc) << '\n';
  }
  return out.str();
}

std::string sampling_csv(const std::vector<SamplingCell>& cells) {
  std::ostringstream out;
  out << "distribution,arm,tp,fp,tn,fn,precision,recall,f1,auc_pr,baseline_prc,train_rows,test_rows,test_hash\n";
  for (const auto& c : cells) {
    out << num(c.distribution) << ',' << c.arm << ',' << c.cm.tp << ',' << c.cm.fp << ',' << c.cm.tn << ','
        << c.cm.fn << ',' << score(c.precision) << ',' << score(c.recall) << ',' << score(c.f1) << ','
        << num(c.auc_pr) << ',' << num(c.baseline_prc) << ',' << c.train_rows << ',' << c.test_rows << ','
        << c.test_hash << '\n';
  }
  return out.str();
}

std::string objectives_csv(const std::vector<ObjectiveRow>& rows) {
  std::ostringstream out;
  out << "family,parameter,f1_mean,f1_std,best_of_family,fold_f1\n";
  for (const auto& r : rows) {
    out << r.family << ',' << (r.parameter ? num(*r.parameter) : "") << ',' << num(r.f1_mean) << ','
        << num(r.f1_std) << ',' << (r.best_of_family ? 1 : 0) << ',';
    for (std::size_t i = 0; i < r.fold_f1.size(); ++i) out << (i ? ";" : "") << num(r.fold_f1[i]);
    out << '\n';
  }
  return out.str();
}

std::string drift_csv(const std::vector<DriftRun>& runs) {
  std::ostringstream out;
  out << "mode,section,train_begin,train_end,test_begin,test_end,f1,baseline_prc\n";
  for (const auto& run : runs) {
    for (const auto& s : run.sections) {
      out << to_string(run.mode) << ',' << s.index << ',' << s.train_begin << ',' << s.train_end << ','
          << s.test_begin << ',' << s.test_end << ',' << num(s.f1) << ',' << num(s.baseline_prc) << '\n';
    }
  }
  return out.str();
}

std::string report_tables(const ExperimentResult& r) {
  std::ostringstream out;
  if (!r.grid.empty()) {
    out << "F1 mean (std) by size, distribution and approach\n";
    std::map<std::pair<std::size_t, double>, std::vector<const GridCell*>> rows;
    std::vector<Approach> order;
    for (const auto& c : r.grid) {
      rows[{c.size, -c.distribution}].push_back(&c);
      if (std::find(order.begin(), order.end(), c.approach) == order.end()) order.push_back(c.approach);
    }
    out << "size   distribution  baseline";
    for (auto a : order) out << "  " << to_string(a);
    out << '\n';
    for (const auto& [key, cells] : rows) {
      out << size_label(key.first) << "  " << percent(1.0 - cells.front()->distribution) << "-"
          << percent(cells.front()->distribution) << "  " << fixed(cells.front()->baseline_prc);
      for (auto a : order) {
        for (const auto* c : cells) {
          if (c->approach == a) out << "  " << mean_std(c->f1_mean, c->f1_std);
        }
      }
      out << '\n';
    }
    out << '\n';
  }
  if (!r.sampling.empty()) {
    out << "Test F1 with and without sampling to balance\n";
    for (const auto& c : r.sampling) {
      out << percent(1.0 - c.distribution) << "-" << percent(c.distribution) << "  " << c.arm
          << "  F1 " << metrics::format_score(c.f1) << "  precision " << metrics::format_score(c.precision)
          << "  recall " << metrics::format_score(c.recall) << '\n';
    }
    out << '\n';
  }
  if (!r.objectives.empty()) {
    out << "F1 mean (std) by loss\n";
    for (const auto& row : r.objectives) {
      out << param_label(row) << "  " << mean_std(row.f1_mean, row.f1_std) << (row.best_of_family ? "  *" : "")
          << '\n';
    }
    out << '\n';
  }
  for (const auto& run : r.drift) {
    out << "Drift, " << to_string(run.mode) << ": F1 per section";
    for (const auto& s : run.sections) out << "  " << fixed(s.f1);
    out << "  mean " << mean_std(run.f1_mean, run.f1_std) << '\n';
  }
  return out.str();
}

nlohmann::ordered_json results_json(const ExperimentResult& r) {
  Json doc;
  doc["grid"] = Json::array();
  for (const auto& c : r.grid) {
    Json cell{{"size", c.size},
              {"distribution", c.distribution},
              {"approach", to_string(c.approach)},
              {"fold_f1", c.fold_f1},
              {"f1_mean", c.f1_mean},
              {"f1_std", c.f1_std},
              {"baseline_prc", c.baseline_prc},
              {"config", gbt::config_to_json(c.chosen)},
              {"seconds", c.seconds}};
    cell["ttest_vs_baseline"] =
        c.vs_baseline ? Json{{"t", c.vs_baseline->t}, {"df", c.vs_baseline->df}, {"p", c.vs_baseline->p}} : Json();
    doc["grid"].push_back(std::move(cell));
  }
  doc["sampling"] = Json::array();
  for (const auto& c : r.sampling) {
    auto opt = [](const metrics::Score& s) { return s ? Json(*s) : Json(); };
    doc["sampling"].push_back({{"distribution", c.distribution},
                               {"arm", c.arm},
                               {"confusion", {{"tp", c.cm.tp}, {"fp", c.cm.fp}, {"tn", c.cm.tn}, {"fn", c.cm.fn}}},
                               {"f1", opt(c.f1)},
                               {"precision", opt(c.precision)},
                               {"recall", opt(c.recall)},
                               {"auc_pr", c.auc_pr},
                               {"baseline_prc", c.baseline_prc},
                               {"train_rows", c.train_rows},
                               {"test_rows", c.test_rows},
                               {"test_hash", c.test_hash}});
  }
  doc["imbalance"] = Json::array();
  for (const auto& row : r.objectives) {
    doc["imbalance"].push_back({{"family", row.family},
                                {"parameter", row.parameter ? Json(*row.parameter) : Json()},
                                {"fold_f1", row.fold_f1},
                                {"f1_mean", row.f1_mean},
                                {"f1_std", row.f1_std},
                                {"best_of_family", row.best_of_family}});
  }
  doc["drift"] = Json::array();
  for (const auto& run : r.drift) {
    Json sections = Json::array();
    for (const auto& s : run.sections) {
      sections.push_back({{"section", s.index},
                          {"train", {s.train_begin, s.train_end}},
                          {"test", {s.test_begin, s.test_end}},
                          {"f1", s.f1},
                          {"baseline_prc", s.baseline_prc},
                          {"config", gbt::config_to_json(s.chosen)}});
    }
    doc["drift"].push_back({{"mode", to_string(run.mode)},
                            {"sections", sections},
                            {"f1_mean", run.f1_mean},
                            {"f1_std", run.f1_std},
                            {"pr_curve", curve_json(run.curve)}});
  }
  return doc;
}

std::vector<std::filesystem::path> emit_report(const ExperimentResult& r, const std::filesystem::path& out_dir) {
  if (r.empty()) throw Error("empty results: nothing to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("unwritable directory: " + out_dir.string());
  std::vector<std::filesystem::path> written;
  if (!r.grid.empty()) write_text(out_dir / "grid.csv", grid_csv(r.grid), written);
  if (!r.sampling.empty()) {
    write_text(out_dir / "sampling.csv", sampling_csv(r.sampling), written);
    for (const auto& c : r.sampling) {
      const auto path = out_dir / ("pr_sampling_" + num(c.distribution) + "_" + slug(c.arm) + ".csv");
      metrics::write_pr_curve_csv(path, c.curve);
      written.push_back(path);
    }
  }
  if (!r.objectives.empty()) write_text(out_dir / "imbalance.csv", objectives_csv(r.objectives), written);
  if (!r.drift.empty()) {
    write_text(out_dir / "drift.csv", drift_csv(r.drift), written);
    for (const auto& run : r.drift) {
      std::ostringstream plot;
      plot << "section,f1\n";
      for (const auto& s : run.sections) plot << s.index << ',' << num(s.f1) << '\n';
      write_text(out_dir / ("f1_by_section_" + std::string(to_string(run.mode)) + ".csv"), plot.str(), written);
      const auto path = out_dir / ("pr_drift_" + std::string(to_string(run.mode)) + ".csv");
      metrics::write_pr_curve_csv(path, run.curve);
      written.push_back(path);
    }
  }
  write_text(out_dir / "results.json", results_json(r).dump(1) + "\n", written);
  write_text(out_dir / "tables.txt", report_tables(r), written);
  return written;
}

}  // namespace imbboost::harness
