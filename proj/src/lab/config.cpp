#include "heislab/lab/config.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "heislab/field.hpp"

namespace heislab::lab {

namespace {

void append_list(std::ostringstream& os, const char* name,
                 const std::vector<double>& v) {
  os << name << "=[";
  char buf[40];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g", v[i]);
    os << (i ? "," : "") << buf;
  }
  os << "];";
}

}  // namespace

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "id=%s;grid=%dx%dx%d;box=%.12g,%.12g,%.12g;k=%d;s=%.12g;s0=%.12g;"
                "p=%d;a=%.12g;epsreg=%.12g;corpus=%d;seed=%llu;format=%s;",
                id.c_str(), grid[0], grid[1], grid[2], box[0], box[1], box[2], k,
                s, s0, p, cutoff_a, eps_reg_factor, corpus_size,
                static_cast<unsigned long long>(seed), format.c_str());
  os << buf;
  append_list(os, "lambdas", lambdas);
  append_list(os, "deltas", deltas);
  append_list(os, "eps", eps);
  return os.str();
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void check_t_resolution(const ExperimentConfig& cfg, double t_frequency) {
  const double needed = 8.0 * t_frequency * cfg.box[2] / std::numbers::pi;
  if (cfg.grid[2] < std::ceil(needed)) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "t-resolution violated: frequency %.6g needs N3 >= %.0f, "
                  "grid has %d",
                  t_frequency, std::ceil(needed), cfg.grid[2]);
    throw ResolutionError(buf);
  }
}

double snap_lambda_squared(const ExperimentConfig& cfg, double lambda) {
  const double step = std::numbers::pi / cfg.box[2];
  const double m = std::max(1.0, std::round(lambda * lambda / step));
  return std::sqrt(m * step);
}

}  // namespace heislab::lab
