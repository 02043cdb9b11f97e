#include "fts/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fts/rng.hpp"

namespace fts {

namespace {

double gauss_kernel(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::nw: return "nw";
    case Scheme::grid: return "grid";
    case Scheme::kde: return "kde";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "nw") return Scheme::nw;
  if (s == "grid") return Scheme::grid;
  if (s == "kde") return Scheme::kde;
  throw std::invalid_argument("unknown reconstruction scheme: " + s);
}

double BandwidthRule::bandwidth(int m) const {
  const double h_eff = kind == Kind::fixed ? h : c * std::pow(m, -b);
  if (!(h_eff > 0.0))
    throw std::invalid_argument("BandwidthRule: bandwidth must be > 0");
  return h_eff;
}

void BandwidthRule::validate(int m) const { (void)bandwidth(m); }

void to_json(nlohmann::json& j, const BandwidthRule& r) {
  if (r.kind == BandwidthRule::Kind::fixed)
    j = nlohmann::json{{"rule", "fixed"}, {"h", r.h}};
  else
    j = nlohmann::json{{"rule", "power"}, {"c", r.c}, {"b", r.b}};
}

void from_json(const nlohmann::json& j, BandwidthRule& r) {
  const std::string rule = j.value("rule", std::string("power"));
  if (rule == "fixed") {
    r.kind = BandwidthRule::Kind::fixed;
    r.h = j.at("h").get<double>();
  } else if (rule == "power") {
    r.kind = BandwidthRule::Kind::power;
    r.c = j.value("c", 1.0);
    r.b = j.value("b", 0.2);
  } else {
    throw std::invalid_argument("unknown bandwidth rule: " + rule);
  }
}

void ReconstructionConfig::validate() const {
  target.validate();
  if (M < 1) throw std::invalid_argument("ReconstructionConfig: M >= 1");
  if (scheme != Scheme::grid) bandwidth.validate(M);
}

void to_json(nlohmann::json& j, const ReconstructionConfig& c) {
  j = nlohmann::json{{"scheme", to_string(c.scheme)},
                     {"M", c.M},
                     {"bandwidth", c.bandwidth},
                     {"target", c.target}};
}

void from_json(const nlohmann::json& j, ReconstructionConfig& c) {
  c.scheme = scheme_from_string(j.value("scheme", std::string("grid")));
  c.M = j.value("M", 100);
  if (j.contains("bandwidth")) j.at("bandwidth").get_to(c.bandwidth);
  if (j.contains("target")) j.at("target").get_to(c.target);
  c.validate();
}

nlohmann::json ObservationRecord::to_json() const {
  nlohmann::json j{{"scheme", to_string(scheme)}};
  switch (scheme) {
    case Scheme::nw:
      j["design_points"] = design_points;
      j["responses"] = responses;
      j["noise_sigma"] = noise_sigma;
      break;
    case Scheme::grid:
      j["node_values"] = node_values;
      j["M"] = M;
      break;
    case Scheme::kde:
      j["sample_points"] = sample_points;
      j["D"] = D;
      break;
  }
  return j;
}

std::pair<GridFunction, ObservationRecord> reconstruct_nw(
    const GridFunction& latent, const ReconstructionConfig& cfg,
    DesignDensity density, double noise_sigma, uint64_t seed) {
  if (cfg.scheme != Scheme::nw)
    throw std::invalid_argument("reconstruct_nw: config scheme must be nw");
  cfg.validate();
  if (latent.dim() != 1)
    throw std::invalid_argument("reconstruct_nw: d = 1 only");
  if (!latent.interval().contains(cfg.target))
    throw std::invalid_argument("reconstruct_nw: target outside latent interval");

  const int m = cfg.M;
  const double h = cfg.bandwidth.bandwidth(m);
  Rng rng(derive_seed(seed, "nw", 0));

  ObservationRecord rec;
  rec.scheme = Scheme::nw;
  rec.noise_sigma = noise_sigma;
  rec.design_points.resize(m);
  rec.responses.resize(m);

  const Interval& iv = latent.interval();
  for (int i = 0; i < m; ++i) {
    double u;
    if (density == DesignDensity::uniform) {
      u = iv.lower + rng.uniform() * iv.length();
    } else {
      // Normal centered at the interval midpoint, sd = length/4, rejected
      // into the interval so design points stay inside the latent domain.
      const double mid = 0.5 * (iv.lower + iv.upper);
      const double sd = iv.length() / 4.0;
      do {
        u = mid + sd * rng.normal();
      } while (!iv.contains(u));
    }
    rec.design_points[i] = u;
    rec.responses[i] = latent.eval1(u) + noise_sigma * rng.normal();
  }

  const double density_per_unit = (latent.n_nodes() - 1) / iv.length();
  const int n_out = std::max<int>(
      2, static_cast<int>(std::llround(density_per_unit * cfg.target.length())) + 1);
  GridFunction est(cfg.target, n_out, 1);
  for (int j = 0; j < n_out; ++j) {
    const double u = est.node(j);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < m; ++i) {
      const double w = gauss_kernel((u - rec.design_points[i]) / h) / h;
      num += w * rec.responses[i];
      den += w;
    }
    if (den < 1e-12) {
      // Starved denominator: nearest design point's response.
      int best = 0;
      for (int i = 1; i < m; ++i)
        if (std::abs(u - rec.design_points[i]) < std::abs(u - rec.design_points[best]))
          best = i;
      est.value(j) = rec.responses[best];
    } else {
      est.value(j) = num / den;
    }
  }
  return {std::move(est), std::move(rec)};
}

std::pair<GridFunction, ObservationRecord> reconstruct_grid(
    const GridFunction& latent, int M) {
  if (M < 1) throw std::invalid_argument("reconstruct_grid: M >= 1");
  if (latent.interval().truncation_of_line)
    throw std::invalid_argument("reconstruct_grid: latent interval must be compact");

  const Interval& iv = latent.interval();
  ObservationRecord rec;
  rec.scheme = Scheme::grid;
  rec.M = M;
  rec.node_values.resize((M + 1) * latent.dim());
  GridFunction samples(iv, M + 1, latent.dim());
  for (int s = 0; s <= M; ++s) {
    const double u = iv.lower + (static_cast<double>(s) / M) * iv.length();
    Eigen::VectorXd v = latent.eval(u);
    for (int l = 0; l < latent.dim(); ++l) {
      samples.value(s, l) = v[l];
      rec.node_values[s * latent.dim() + l] = v[l];
    }
  }

  GridFunction est(iv, latent.n_nodes(), latent.dim());
  for (int j = 0; j < latent.n_nodes(); ++j) {
    Eigen::VectorXd v = samples.eval(est.node(j));
    for (int l = 0; l < latent.dim(); ++l) est.value(j, l) = v[l];
  }
  return {std::move(est), std::move(rec)};
}

std::pair<GridFunction, ObservationRecord> reconstruct_kde(
    const GridFunction& latent_density, int D, const BandwidthRule& bandwidth,
    uint64_t seed) {
  if (D < 1) throw std::invalid_argument("reconstruct_kde: D >= 1");
  if (latent_density.dim() != 1)
    throw std::invalid_argument("reconstruct_kde: d = 1 only");

  const GridFunction& f = latent_density;
  const int n = f.n_nodes();
  const double mesh = f.mesh();
  for (int j = 0; j < n; ++j)
    if (f.value(j) < -1e-12)
      throw std::invalid_argument("reconstruct_kde: density must be >= 0");
  // Trapezoid CDF at nodes.
  std::vector<double> cdf(n, 0.0);
  for (int j = 1; j < n; ++j)
    cdf[j] = cdf[j - 1] + 0.5 * (f.value(j - 1) + f.value(j)) * mesh;
  if (std::abs(cdf[n - 1] - 1.0) > 1e-6)
    throw std::invalid_argument("reconstruct_kde: density must integrate to 1");

  const double h = bandwidth.bandwidth(D);
  Rng rng(derive_seed(seed, "kde", 0));

  ObservationRecord rec;
  rec.scheme = Scheme::kde;
  rec.D = D;
  rec.sample_points.resize(D);
  const double total = cdf[n - 1];
  for (int i = 0; i < D; ++i) {
    const double v = rng.uniform() * total;
    // Locate segment, then invert the quadratic CDF piece exactly.
    const int j = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), v) -
                                   cdf.begin()) - 1;
    const int seg = std::clamp(j, 0, n - 2);
    const double a = f.value(seg), b = f.value(seg + 1);
    const double r = v - cdf[seg];  // mass to place inside the segment
    double s;                        // offset within [0, mesh]
    if (std::abs(b - a) < 1e-14 * std::max(1.0, std::abs(a))) {
      s = a > 0.0 ? r / a : 0.5 * mesh;
    } else {
      const double slope = (b - a) / mesh;
      const double disc = std::max(0.0, a * a + 2.0 * slope * r);
      s = (std::sqrt(disc) - a) / slope;
    }
    rec.sample_points[i] = f.node(seg) + std::clamp(s, 0.0, mesh);
  }

  GridFunction est(f.interval(), n, 1);
  for (int j = 0; j < n; ++j) {
    const double u = est.node(j);
    double sum = 0.0;
    for (int i = 0; i < D; ++i) sum += gauss_kernel((u - rec.sample_points[i]) / h);
    est.value(j) = sum / (D * h);
  }
  return {std::move(est), std::move(rec)};
}

}  // namespace fts
