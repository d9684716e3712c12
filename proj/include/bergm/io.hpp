#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "bergm/evidence.hpp"
#include "bergm/exchange.hpp"
#include "bergm/summary.hpp"

namespace bergm {

/// Shortest decimal form that round-trips, with '.' as the separator.
std::string format_double(double x);

/// Writes bytes verbatim (LF line endings are the caller's text).
void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

/// Header row of column names, then one row per draw.
std::string draws_to_csv(const std::vector<std::string>& columns, const Eigen::MatrixXd& draws);
/// Parses a draws CSV. Column names must follow the theta.<stat> / phi.<i> /
/// mu_phi / sigma2_phi grammar.
ChainOutput parse_draws_csv(std::string_view text);
ChainOutput load_draws_csv(const std::string& path);

/// Model implied by a draws header (statistics + whether phi columns exist).
ModelSpec model_from_columns(const std::vector<std::string>& columns, const PriorHyper& hyper = {});

/// lag, then one column per parameter.
std::string acf_to_csv(const ChainSummary& s);

nlohmann::ordered_json to_json(const AcceptanceRates& a);
nlohmann::ordered_json to_json(const ChainSummary& s);
nlohmann::ordered_json to_json(const ChainConfig& c);
nlohmann::ordered_json to_json(const SimConfig& c);
nlohmann::ordered_json to_json(const PriorHyper& h);
nlohmann::ordered_json to_json(const PathConfig& c);
nlohmann::ordered_json to_json(const LaplaceConfig& c);
nlohmann::ordered_json to_json(const EvidenceReport& r);

/// JSON text with a trailing newline.
std::string dump_json(const nlohmann::ordered_json& j);

}  // namespace bergm
