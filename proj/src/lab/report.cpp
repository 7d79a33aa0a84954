#include "heislab/lab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace heislab::lab {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

nlohmann::ordered_json fit_json(const PowerLawFit& f) {
  nlohmann::ordered_json j;
  j["slope"] = f.slope;
  j["stderr"] = f.stderr_slope;
  j["r2"] = f.r2;
  j["points"] = f.points;
  return j;
}

}  // namespace

bool ScalingReport::pass() const {
  for (const auto& s : series)
    if (!s.pass) return false;
  return true;
}

bool IdentityReport::pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

std::string to_csv(const ScalingReport& r) {
  std::ostringstream os;
  os << "# report=scaling,which=" << r.which << ",sweep=" << r.sweep_name
     << ",config_hash=" << r.cfg.hash() << "\n";
  os << "# config=" << r.cfg.canonical() << "\n";
  for (const auto& note : r.notes) os << "# note=" << note << "\n";
  os << "series,x,measured,oracle,fit\n";
  for (const auto& s : r.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double fitted =
          std::exp(s.fit.intercept + s.fit.slope * std::log(s.x[i]));
      os << s.name << ',' << fmt(s.x[i]) << ',' << fmt(s.measured[i]) << ','
         << (i < s.oracle.size() ? fmt(s.oracle[i]) : "") << ',' << fmt(fitted)
         << "\n";
    }
  }
  os << "series,slope,stderr,r2,oracle_slope,pass\n";
  for (const auto& s : r.series)
    os << s.name << ',' << fmt(s.fit.slope) << ',' << fmt(s.fit.stderr_slope)
       << ',' << fmt(s.fit.r2) << ','
       << (s.oracle_slope ? fmt(*s.oracle_slope) : "") << ','
       << (s.pass ? "1" : "0") << "\n";
  return os.str();
}

std::string to_json(const ScalingReport& r) {
  nlohmann::ordered_json j;
  j["report"] = "scaling";
  j["which"] = r.which;
  j["sweep"] = r.sweep_name;
  j["config_hash"] = r.cfg.hash();
  j["config"] = r.cfg.canonical();
  j["notes"] = r.notes;
  j["series"] = nlohmann::ordered_json::array();
  for (const auto& s : r.series) {
    nlohmann::ordered_json js;
    js["name"] = s.name;
    js["x"] = s.x;
    js["measured"] = s.measured;
    js["oracle"] = s.oracle;
    js["fit"] = fit_json(s.fit);
    if (s.oracle_slope) js["oracle_slope"] = *s.oracle_slope;
    if (s.slope_tol) js["slope_tol"] = *s.slope_tol;
    if (s.slope_floor) js["slope_floor"] = *s.slope_floor;
    if (s.slope_cap) js["slope_cap"] = *s.slope_cap;
    js["pass"] = s.pass;
    j["series"].push_back(js);
  }
  j["pass"] = r.pass();
  return j.dump(2) + "\n";
}

std::string to_csv(const EstimateReport& r) {
  std::ostringstream os;
  os << "# report=estimate,which=" << r.which << ",config_hash=" << r.cfg.hash()
     << "\n";
  os << "# config=" << r.cfg.canonical() << "\n";
  os << "# corpus=" << r.corpus_desc << "\n";
  os << "sample,ratio,ratio_refined,ratio_reseeded\n";
  const std::size_t n = r.ratios.size();
  for (std::size_t i = 0; i < n; ++i) {
    os << i << ',' << fmt(r.ratios[i]) << ','
       << (i < r.ratios_refined.size() ? fmt(r.ratios_refined[i]) : "") << ','
       << (i < r.ratios_reseeded.size() ? fmt(r.ratios_reseeded[i]) : "") << "\n";
  }
  os << "max_ratio,refined_max,reseeded_max,drift_refine,drift_reseed,pass\n";
  os << fmt(r.max_ratio) << ',' << fmt(r.refined_max) << ',' << fmt(r.reseeded_max)
     << ',' << fmt(r.drift_refine) << ',' << fmt(r.drift_reseed) << ','
     << (r.pass ? "1" : "0") << "\n";
  if (!r.stressor_lambdas.empty()) {
    os << "stressor_lambda,ratio,ratio_lowered_index\n";
    for (std::size_t i = 0; i < r.stressor_lambdas.size(); ++i)
      os << fmt(r.stressor_lambdas[i]) << ',' << fmt(r.stressor_ratios[i]) << ','
         << fmt(r.stressor_ratios_lowered[i]) << "\n";
  }
  return os.str();
}

std::string to_json(const EstimateReport& r) {
  nlohmann::ordered_json j;
  j["report"] = "estimate";
  j["which"] = r.which;
  j["config_hash"] = r.cfg.hash();
  j["config"] = r.cfg.canonical();
  j["corpus"] = r.corpus_desc;
  j["ratios"] = r.ratios;
  j["ratios_refined"] = r.ratios_refined;
  j["ratios_reseeded"] = r.ratios_reseeded;
  j["max_ratio"] = r.max_ratio;
  j["refined_max"] = r.refined_max;
  j["reseeded_max"] = r.reseeded_max;
  j["drift_refine"] = r.drift_refine;
  j["drift_reseed"] = r.drift_reseed;
  j["drift_tol"] = r.drift_tol;
  if (!r.stressor_lambdas.empty()) {
    j["stressor_lambdas"] = r.stressor_lambdas;
    j["stressor_ratios"] = r.stressor_ratios;
    j["stressor_ratios_lowered"] = r.stressor_ratios_lowered;
    j["stressor_growth"] = r.stressor_growth;
  }
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

std::string to_csv(const IdentityReport& r) {
  std::ostringstream os;
  os << "# report=identities,config_hash=" << r.cfg.hash() << "\n";
  os << "# config=" << r.cfg.canonical() << "\n";
  os << "check,measured,threshold,pass\n";
  for (const auto& row : r.rows)
    os << row.check << ',' << fmt(row.measured) << ',' << fmt(row.threshold)
       << ',' << (row.pass ? "1" : "0") << "\n";
  return os.str();
}

std::string to_json(const IdentityReport& r) {
  nlohmann::ordered_json j;
  j["report"] = "identities";
  j["config_hash"] = r.cfg.hash();
  j["config"] = r.cfg.canonical();
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json jr;
    jr["check"] = row.check;
    jr["measured"] = row.measured;
    jr["threshold"] = row.threshold;
    jr["pass"] = row.pass;
    j["rows"].push_back(jr);
  }
  j["pass"] = r.pass();
  return j.dump(2) + "\n";
}

std::string to_csv(const SolveReport& r) {
  std::ostringstream os;
  os << "# report=solve,config_hash=" << r.cfg.hash() << "\n";
  os << "# config=" << r.cfg.canonical() << "\n";
  os << "k,converged,iterations,rel_residual,eps_reg,scale,recovery_error,"
        "energy_monotone,plus_fraction,zero_fraction\n";
  os << r.k << ',' << (r.converged ? "1" : "0") << ',' << r.iterations << ','
     << fmt(r.rel_residual) << ',' << fmt(r.eps_reg) << ',' << fmt(r.scale) << ','
     << fmt(r.recovery_error) << ',' << (r.energy_monotone ? "1" : "0") << ','
     << fmt(r.plus_fraction) << ',' << fmt(r.zero_fraction) << "\n";
  os << "sample,ratio\n";
  for (std::size_t i = 0; i < r.ratio_corpus.size(); ++i)
    os << i << ',' << fmt(r.ratio_corpus[i]) << "\n";
  os << "max_ratio,refined_max,reseeded_max,drift_refine,drift_reseed,pass\n";
  os << fmt(r.max_ratio) << ',' << fmt(r.refined_max) << ',' << fmt(r.reseeded_max)
     << ',' << fmt(r.drift_refine) << ',' << fmt(r.drift_reseed) << ','
     << (r.pass ? "1" : "0") << "\n";
  return os.str();
}

std::string to_json(const SolveReport& r) {
  nlohmann::ordered_json j;
  j["report"] = "solve";
  j["config_hash"] = r.cfg.hash();
  j["config"] = r.cfg.canonical();
  j["k"] = r.k;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["rel_residual"] = r.rel_residual;
  j["eps_reg"] = r.eps_reg;
  j["scale"] = r.scale;
  j["recovery_error"] = r.recovery_error;
  j["energy_monotone"] = r.energy_monotone;
  j["plus_fraction"] = r.plus_fraction;
  j["zero_fraction"] = r.zero_fraction;
  j["ratio_corpus"] = r.ratio_corpus;
  j["max_ratio"] = r.max_ratio;
  j["refined_max"] = r.refined_max;
  j["reseeded_max"] = r.reseeded_max;
  j["drift_refine"] = r.drift_refine;
  j["drift_reseed"] = r.drift_reseed;
  j["ratios_pass"] = r.ratios_pass;
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& payload) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_file: cannot open " + path);
  os << payload;
  if (!os) throw std::runtime_error("write_file: write failed for " + path);
}

}  // namespace heislab::lab
