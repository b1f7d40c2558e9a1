#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "clt/analysis.hpp"
#include "clt/density.hpp"
#include "clt/distributions.hpp"
#include "clt/edgeworth.hpp"
#include "clt/entropy.hpp"

namespace clt {

using json = nlohmann::ordered_json;

/// 17 significant digits ("%.17g"). JSON numbers use the library's round-trip form.
std::string format_double(double v);

/// {"kind": ..., "params": {...}}. Mixtures store weights, means and sds as given.
json source_to_json(const SourceSpec& spec);

/// Inverse of source_to_json. Throws UsageError on malformed input.
SourceSpec source_from_json(const json& j);

/// {source, n, L, m, provenance, mass, variance, preclip_min}.
json density_metadata(const GridDensity& gd, const SourceSpec& spec);

std::string density_csv(const GridDensity& gd);
std::string entropy_csv(const std::vector<EntropyValue>& values);
std::string rate_csv(const RateSeries& series);
std::string edgeworth_csv(const std::vector<EdgeworthPoint>& points);

/// n as a JSON number, or the string "inf" for the Gaussian limit.
json n_to_json(std::uint64_t n);

/// Four-space indented JSON, newline-terminated.
std::string dump_json(const json& j);

/// Writes the whole string, creating parent directories. Throws std::runtime_error on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace clt
