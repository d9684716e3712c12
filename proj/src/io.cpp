#include "bergm/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bergm/error.hpp"

namespace bergm {

using nlohmann::ordered_json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DomainError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string draws_to_csv(const std::vector<std::string>& columns, const Eigen::MatrixXd& draws) {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (Eigen::Index r = 0; r < draws.rows(); ++r) {
    for (Eigen::Index c = 0; c < draws.cols(); ++c) {
      if (c) out += ',';
      out += format_double(draws(r, c));
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto end = line.find(',', start);
    out.push_back(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

void check_column_name(std::string_view name, std::size_t line) {
  if (name == "mu_phi" || name == "sigma2_phi") return;
  if (name.starts_with("theta.")) {
    parse_statistic(name.substr(6));
    return;
  }
  if (name.starts_with("phi.")) {
    int idx = 0;
    const auto digits = name.substr(4);
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
    if (res.ec == std::errc() && res.ptr == digits.data() + digits.size() && idx >= 1) return;
  }
  throw ParseError(line, "unrecognized draws column '" + std::string(name) + "'");
}

}  // namespace

ChainOutput parse_draws_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) throw ParseError(1, "empty draws file");

  ChainOutput out;
  for (auto name : split_csv_line(lines[0])) {
    check_column_name(name, 1);
    out.columns.emplace_back(name);
  }
  if (lines.size() < 2) throw ParseError(2, "draws file has a header but no draws");
  const auto cols = static_cast<Eigen::Index>(out.columns.size());
  out.draws.resize(static_cast<Eigen::Index>(lines.size() - 1), cols);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_csv_line(lines[r]);
    if (static_cast<Eigen::Index>(fields.size()) != cols)
      throw ParseError(r + 1, "expected " + std::to_string(cols) + " fields");
    for (Eigen::Index c = 0; c < cols; ++c) {
      double v = 0.0;
      const auto f = fields[c];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size())
        throw ParseError(r + 1, "not a number: '" + std::string(f) + "'");
      out.draws(static_cast<Eigen::Index>(r - 1), c) = v;
    }
  }
  return out;
}

ChainOutput load_draws_csv(const std::string& path) { return parse_draws_csv(read_text_file(path)); }

ModelSpec model_from_columns(const std::vector<std::string>& columns, const PriorHyper& hyper) {
  std::vector<StatisticKind> stats;
  bool random_effects = false;
  for (const auto& c : columns) {
    if (c.starts_with("theta.")) stats.push_back(parse_statistic(std::string_view(c).substr(6)));
    if (c.starts_with("phi.") || c == "mu_phi" || c == "sigma2_phi") random_effects = true;
  }
  return ModelSpec(std::move(stats), random_effects, hyper);
}

std::string acf_to_csv(const ChainSummary& s) {
  std::string out = "lag";
  std::size_t lags = 0;
  for (const auto& c : s.columns) {
    out += ',' + c.name;
    lags = std::max(lags, c.acf.size());
  }
  out += '\n';
  for (std::size_t k = 0; k < lags; ++k) {
    out += std::to_string(k + 1);
    for (const auto& c : s.columns) out += ',' + (k < c.acf.size() ? format_double(c.acf[k]) : std::string());
    out += '\n';
  }
  return out;
}

namespace {

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

}  // namespace

ordered_json to_json(const AcceptanceRates& a) {
  return ordered_json{{"theta", optional_number(a.theta)},
                      {"phi", optional_number(a.phi)},
                      {"mu_phi", optional_number(a.mu_phi)},
                      {"sigma2_phi", optional_number(a.sigma2_phi)}};
}

ordered_json to_json(const ChainSummary& s) {
  ordered_json params = ordered_json::object();
  for (const auto& c : s.columns) {
    ordered_json p{{"mean", c.mean}, {"sd", c.sd}};
    if (c.geometric_mean) p["geometric_mean"] = *c.geometric_mean;
    p["q05"] = c.q05;
    p["median"] = c.median;
    p["q95"] = c.q95;
    p["mcse"] = c.mcse;
    p["acf_lag1"] = c.acf.empty() ? ordered_json(nullptr) : ordered_json(c.acf.front());
    p["acf_degenerate"] = c.acf_degenerate;
    params[c.name] = std::move(p);
  }
  return ordered_json{{"rows", s.rows}, {"acceptance", to_json(s.accept)}, {"parameters", std::move(params)}};
}

ordered_json to_json(const SimConfig& c) {
  ordered_json j;
  j["aux_iters"] = c.aux_iters ? ordered_json(*c.aux_iters) : ordered_json("n(n-1)/2");
  j["sampler"] = std::string(sampler_name(c.sampler));
  j["init"] = c.init == InitKind::Observed ? "observed" : c.init == InitKind::Empty ? "empty" : "random";
  if (c.init == InitKind::Random) j["init_density"] = c.init_density;
  return j;
}

ordered_json to_json(const ChainConfig& c) {
  return ordered_json{{"burnin", c.burnin},
                      {"iters", c.main_iters},
                      {"thin", c.thin},
                      {"aux", to_json(c.aux)},
                      {"prop_sd_theta", c.prop_sd_theta},
                      {"prop_sd_phi", c.prop_sd_phi},
                      {"prop_sd_mu", c.prop_sd_mu},
                      {"prop_halfwidth_sigma2", c.prop_halfwidth_sigma2},
                      {"seed", c.seed},
                      {"phi_scan", std::string(phi_scan_name(c.phi_scan))}};
}

ordered_json to_json(const PriorHyper& h) {
  return ordered_json{{"rho2", h.rho2}, {"tau2", h.tau2}, {"ig_a", h.ig_a}, {"ig_b", h.ig_b}};
}

ordered_json to_json(const PathConfig& c) {
  return ordered_json{{"grid_points", c.grid_points},
                      {"draws_per_point", c.draws_per_point},
                      {"sim", to_json(c.sim)},
                      {"seed", c.seed},
                      {"threads", c.threads}};
}

ordered_json to_json(const LaplaceConfig& c) {
  return ordered_json{{"cov_sims", c.cov_sims}, {"sim", to_json(c.sim)}, {"seed", c.seed}};
}

ordered_json to_json(const EvidenceReport& r) {
  const auto& c = r.components;
  ordered_json j;
  j["log_bf_21"] = r.log_bf_21;
  j["components"] = ordered_json{{"log_likelihood_ratio_term", c.log_likelihood_ratio_term},
                                 {"log_laplace_term", c.log_laplace_term},
                                 {"log_kappa_ratio", c.log_kappa_ratio},
                                 {"log_prior_ratio", c.log_prior_ratio},
                                 {"log_posterior_density_ratio", c.log_posterior_density_ratio}};
  j["plugin"] = ordered_json{{"theta_fixed", r.plugin.theta_fixed},
                             {"theta_mixed", r.plugin.theta_mixed},
                             {"mu_hat", r.plugin.mu_hat},
                             {"log_sigma2_hat", r.plugin.log_sigma2_hat},
                             {"sigma2_hat", r.plugin.sigma2_hat()},
                             {"phi_hat", r.plugin.phi_hat}};
  j["laplace"] = ordered_json{{"theta_dot_s", r.laplace.theta_dot_s},
                              {"log_f_laplace", r.laplace.log_f_laplace},
                              {"log_det_neg_hessian", r.laplace.log_det_neg_hessian}};
  j["posterior_density"] = ordered_json{{"log_fixed", r.log_posterior_fixed}, {"log_mixed", r.log_posterior_mixed}};
  j["path"] = ordered_json{{"grid", r.path.grid},
                           {"expectations", r.path.expectations},
                           {"std_errors", r.path.std_errors}};
  return j;
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace bergm
