#include "otgsa/dist/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "otgsa/dist/special.hpp"

namespace otgsa::dist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Unbounded families cannot return a finite value at u = 0 or 1 exactly;
// nudge into the open interval instead of erroring.
double clamp_open(double u) { return std::clamp(u, 1e-16, 1.0 - 1e-16); }

double kde_cdf_raw(const KdeData& kde, double x) {
  double acc = 0.0;
  for (const double obs : kde.observations)
    acc += normal_cdf((x - obs) / kde.bandwidth);
  return acc / static_cast<double>(kde.observations.size());
}

double kde_pdf_raw(const KdeData& kde, double x) {
  constexpr double inv_sqrt_2pi = 0.3989422804014327;
  double acc = 0.0;
  for (const double obs : kde.observations) {
    const double z = (x - obs) / kde.bandwidth;
    acc += inv_sqrt_2pi * std::exp(-0.5 * z * z);
  }
  return acc / (kde.bandwidth * static_cast<double>(kde.observations.size()));
}

double kde_quantile(const KdeData& kde, double u) {
  u = clamp_open(u);
  const auto [min_it, max_it] =
      std::minmax_element(kde.observations.begin(), kde.observations.end());
  double lo = *min_it - 10.0 * kde.bandwidth;
  double hi = *max_it + 10.0 * kde.bandwidth;
  double mass_lo = 0.0;
  if (kde.lower) {
    lo = std::max(lo, *kde.lower);
    mass_lo = kde_cdf_raw(kde, *kde.lower);
    if (mass_lo >= 1.0 - 1e-14)
      throw std::invalid_argument("kde quantile: truncation removes all mass");
  }
  const double target = mass_lo + u * (1.0 - mass_lo);
  while (kde_cdf_raw(kde, hi) < target) hi += 10.0 * kde.bandwidth;

  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double err = kde_cdf_raw(kde, x) - target;
    if (err > 0)
      hi = x;
    else
      lo = x;
    const double pdf = kde_pdf_raw(kde, x);
    double next = pdf > 0 ? x - err / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-14 * (1.0 + std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  if (kde.lower && x < *kde.lower) x = *kde.lower;
  return x;
}

double truncated_normal_quantile(const TruncatedNormal& tn, double u) {
  const double p_lo = normal_cdf((tn.lo - tn.mean) / tn.sd);
  const double p_hi =
      std::isinf(tn.hi) ? 1.0 : normal_cdf((tn.hi - tn.mean) / tn.sd);
  if (p_hi - p_lo < 1e-300)
    throw std::invalid_argument("truncated normal: no mass between bounds");
  const double p = p_lo + clamp_open(u) * (p_hi - p_lo);
  double x = tn.mean + tn.sd * normal_quantile(p);
  return std::clamp(x, tn.lo, tn.hi);
}

}  // namespace

void validate(const DistributionSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          if (!(s.lo < s.hi))
            throw std::invalid_argument("uniform: requires lo < hi");
        } else if constexpr (std::is_same_v<T, DiscreteUniform>) {
          if (s.values.empty())
            throw std::invalid_argument("discrete uniform: empty value set");
          if (!std::is_sorted(s.values.begin(), s.values.end()))
            throw std::invalid_argument("discrete uniform: values not ordered");
        } else if constexpr (std::is_same_v<T, TruncatedNormal>) {
          if (!(s.sd > 0))
            throw std::invalid_argument("truncated normal: sd must be positive");
          if (!(s.lo < s.hi))
            throw std::invalid_argument("truncated normal: requires lo < hi");
        } else if constexpr (std::is_same_v<T, Gamma>) {
          if (!(s.shape > 0) || !(s.rate > 0))
            throw std::invalid_argument("gamma: shape and rate must be positive");
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          if (!(s.sd_log > 0))
            throw std::invalid_argument("log-normal: sd must be positive");
        } else if constexpr (std::is_same_v<T, KdeData>) {
          if (s.observations.size() < 5)
            throw std::invalid_argument("kde: needs at least 5 observations");
          if (!(s.bandwidth > 0))
            throw std::invalid_argument("kde: bandwidth must be positive");
        }
      },
      spec);
}

double quantile(const DistributionSpec& spec, double u) {
  if (!(u >= 0.0 && u <= 1.0))
    throw std::invalid_argument("quantile: u outside [0,1]");
  return std::visit(
      [u](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          return s.lo + u * (s.hi - s.lo);
        } else if constexpr (std::is_same_v<T, DiscreteUniform>) {
          const auto k = s.values.size();
          const auto idx = u == 0.0
                               ? std::size_t{0}
                               : static_cast<std::size_t>(
                                     std::ceil(u * static_cast<double>(k))) -
                                     1;
          return s.values[std::min(idx, k - 1)];
        } else if constexpr (std::is_same_v<T, Delta>) {
          return s.point;
        } else if constexpr (std::is_same_v<T, TruncatedNormal>) {
          return truncated_normal_quantile(s, u);
        } else if constexpr (std::is_same_v<T, Gamma>) {
          return gamma_quantile(s.shape, s.rate, clamp_open(u));
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          return std::exp(s.mu_log + s.sd_log * normal_quantile(clamp_open(u)));
        } else {
          return kde_quantile(s, u);
        }
      },
      spec);
}

double cdf(const DistributionSpec& spec, double x) {
  return std::visit(
      [x](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          return std::clamp((x - s.lo) / (s.hi - s.lo), 0.0, 1.0);
        } else if constexpr (std::is_same_v<T, DiscreteUniform>) {
          const auto upper =
              std::upper_bound(s.values.begin(), s.values.end(), x);
          return static_cast<double>(upper - s.values.begin()) /
                 static_cast<double>(s.values.size());
        } else if constexpr (std::is_same_v<T, Delta>) {
          return x >= s.point ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, TruncatedNormal>) {
          if (x <= s.lo) return 0.0;
          if (x >= s.hi) return 1.0;
          const double p_lo = normal_cdf((s.lo - s.mean) / s.sd);
          const double p_hi =
              std::isinf(s.hi) ? 1.0 : normal_cdf((s.hi - s.mean) / s.sd);
          return (normal_cdf((x - s.mean) / s.sd) - p_lo) / (p_hi - p_lo);
        } else if constexpr (std::is_same_v<T, Gamma>) {
          return x <= 0 ? 0.0 : gamma_p(s.shape, s.rate * x);
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          return x <= 0 ? 0.0
                        : normal_cdf((std::log(x) - s.mu_log) / s.sd_log);
        } else {
          const double raw = kde_cdf_raw(s, x);
          if (!s.lower) return raw;
          if (x <= *s.lower) return 0.0;
          const double mass_lo = kde_cdf_raw(s, *s.lower);
          return (raw - mass_lo) / (1.0 - mass_lo);
        }
      },
      spec);
}

KdeData kde_fit(const std::vector<double>& data,
                std::optional<double> lower_truncation) {
  KdeData kde;
  kde.lower = lower_truncation;
  for (const double x : data)
    if (!lower_truncation || x >= *lower_truncation)
      kde.observations.push_back(x);
  if (kde.observations.size() < 5)
    throw std::invalid_argument(
        "kde_fit: fewer than 5 observations after truncation");
  std::sort(kde.observations.begin(), kde.observations.end());

  const auto n = static_cast<double>(kde.observations.size());
  double mean = 0.0;
  for (const double x : kde.observations) mean += x;
  mean /= n;
  double ss = 0.0;
  for (const double x : kde.observations) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));

  const auto type7 = [&](double p) {
    const double h = (n - 1.0) * p;
    const auto k = static_cast<std::size_t>(std::floor(h));
    const double frac = h - std::floor(h);
    const double lo = kde.observations[k];
    const double hi = kde.observations[std::min<std::size_t>(
        k + 1, kde.observations.size() - 1)];
    return lo + frac * (hi - lo);
  };
  const double iqr = type7(0.75) - type7(0.25);

  // Silverman's rule of thumb; degenerate spreads fall back to a small
  // positive width so constant data still yields a proper distribution.
  double spread = sd;
  if (iqr > 0) spread = std::min(spread, iqr / 1.34);
  if (!(spread > 0))
    spread = 1e-3 * std::max(1.0, std::abs(kde.observations.front()));
  kde.bandwidth = 0.9 * spread * std::pow(n, -0.2);
  return kde;
}

std::vector<double> load_observation_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open observation file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty observation file: " + path);
  if (line != "value" && line != "value\r")
    throw std::runtime_error("observation file must have a `value` header");
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    values.push_back(std::stod(line));
  }
  return values;
}

std::string family_name(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Uniform>) return "uniform";
        if constexpr (std::is_same_v<T, DiscreteUniform>)
          return "discrete_uniform";
        if constexpr (std::is_same_v<T, Delta>) return "delta";
        if constexpr (std::is_same_v<T, TruncatedNormal>)
          return "truncated_normal";
        if constexpr (std::is_same_v<T, Gamma>) return "gamma";
        if constexpr (std::is_same_v<T, LogNormal>) return "log_normal";
        if constexpr (std::is_same_v<T, KdeData>) return "kde";
      },
      spec);
}

nlohmann::json to_json(const DistributionSpec& spec) {
  nlohmann::json node;
  node["family"] = family_name(spec);
  std::visit(
      [&node](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          node["lo"] = s.lo;
          node["hi"] = s.hi;
        } else if constexpr (std::is_same_v<T, DiscreteUniform>) {
          node["values"] = s.values;
        } else if constexpr (std::is_same_v<T, Delta>) {
          node["point"] = s.point;
        } else if constexpr (std::is_same_v<T, TruncatedNormal>) {
          node["mean"] = s.mean;
          node["sd"] = s.sd;
          node["lo"] = s.lo;
          if (!std::isinf(s.hi)) node["hi"] = s.hi;
        } else if constexpr (std::is_same_v<T, Gamma>) {
          node["shape"] = s.shape;
          node["rate"] = s.rate;
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          node["mu_log"] = s.mu_log;
          node["sd_log"] = s.sd_log;
        } else if constexpr (std::is_same_v<T, KdeData>) {
          node["observations"] = s.observations;
          node["bandwidth"] = s.bandwidth;
          if (s.lower) node["lower"] = *s.lower;
        }
      },
      spec);
  return node;
}

DistributionSpec spec_from_json(const nlohmann::json& node) {
  const std::string family = node.at("family").get<std::string>();
  DistributionSpec spec;
  if (family == "uniform") {
    spec = Uniform{node.at("lo").get<double>(), node.at("hi").get<double>()};
  } else if (family == "discrete_uniform") {
    spec = DiscreteUniform{node.at("values").get<std::vector<double>>()};
  } else if (family == "delta") {
    spec = Delta{node.at("point").get<double>()};
  } else if (family == "truncated_normal") {
    spec = TruncatedNormal{node.at("mean").get<double>(),
                           node.at("sd").get<double>(),
                           node.at("lo").get<double>(),
                           node.contains("hi") ? node.at("hi").get<double>()
                                               : kInf};
  } else if (family == "gamma") {
    spec = Gamma{node.at("shape").get<double>(), node.at("rate").get<double>()};
  } else if (family == "log_normal") {
    spec = LogNormal{node.at("mu_log").get<double>(),
                     node.at("sd_log").get<double>()};
  } else if (family == "kde") {
    std::optional<double> lower;
    if (node.contains("lower")) lower = node.at("lower").get<double>();
    KdeData kde =
        kde_fit(node.at("observations").get<std::vector<double>>(), lower);
    if (node.contains("bandwidth"))
      kde.bandwidth = node.at("bandwidth").get<double>();
    spec = kde;
  } else {
    throw std::invalid_argument("unknown distribution family: " + family);
  }
  validate(spec);
  return spec;
}

}  // namespace otgsa::dist
