#include "clt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "clt/errors.hpp"

namespace clt {
namespace {

void append_row(std::string& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  out += '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json source_to_json(const SourceSpec& spec) {
  json j;
  j["kind"] = std::string(spec.name());
  json params = json::object();
  if (spec.kind() == SourceKind::gaussian_mixture) {
    json w = json::array(), mu = json::array(), sd = json::array();
    for (const auto& c : spec.raw_components()) {
      w.push_back(c.weight);
      mu.push_back(c.mean);
      sd.push_back(c.sd);
    }
    params["weights"] = w;
    params["means"] = mu;
    params["sds"] = sd;
  }
  j["params"] = params;
  return j;
}

SourceSpec source_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw UsageError("source spec must be an object with a string \"kind\"");
  const SourceKind kind = parse_source_kind(j["kind"].get<std::string>());
  const json params = j.contains("params") ? j["params"] : json::object();
  if (!params.is_object()) throw UsageError("source \"params\" must be an object");
  if (kind != SourceKind::gaussian_mixture) {
    if (!params.empty())
      throw UsageError("source kind '" + j["kind"].get<std::string>() + "' takes no params");
    return default_source(kind);
  }
  if (params.empty()) return SourceSpec::default_mixture();
  auto vec = [&](const char* key) {
    if (!params.contains(key) || !params[key].is_array())
      throw UsageError(std::string("gaussian_mixture params need array \"") + key + "\"");
    std::vector<double> v;
    for (const auto& e : params[key]) {
      if (!e.is_number()) throw UsageError(std::string("non-numeric entry in \"") + key + "\"");
      v.push_back(e.get<double>());
    }
    return v;
  };
  const auto w = vec("weights"), mu = vec("means"), sd = vec("sds");
  if (w.size() != mu.size() || w.size() != sd.size())
    throw UsageError("gaussian_mixture arrays must have equal length");
  std::vector<MixtureComponent> comps;
  for (std::size_t i = 0; i < w.size(); ++i) comps.push_back({w[i], mu[i], sd[i]});
  return SourceSpec::gaussian_mixture(comps);
}

json n_to_json(std::uint64_t n) { return n == kGaussianLimit ? json("inf") : json(n); }

json density_metadata(const GridDensity& gd, const SourceSpec& spec) {
  const auto diag = validate_density(gd);
  json j;
  j["source"] = source_to_json(spec);
  j["n"] = n_to_json(gd.n);
  j["L"] = gd.grid.half_width;
  j["m"] = gd.grid.points;
  j["provenance"] = std::string(provenance_name(gd.provenance));
  j["mass"] = diag.mass;
  j["variance"] = diag.variance;
  j["preclip_min"] = diag.preclip_min;
  return j;
}

std::string density_csv(const GridDensity& gd) {
  std::string out = "x,density\n";
  out.reserve(gd.values.size() * 48);
  for (std::size_t j = 0; j < gd.values.size(); ++j)
    append_row(out, {format_double(gd.grid.x(j)), format_double(gd.values[j])});
  return out;
}

std::string entropy_csv(const std::vector<EntropyValue>& values) {
  std::string out = "alpha,kind,value,method\n";
  for (const auto& v : values)
    append_row(out, {format_double(v.order.alpha()), std::string(entropy_kind_name(v.kind)),
                     format_double(v.value), std::string(entropy_method_name(v.method))});
  return out;
}

std::string rate_csv(const RateSeries& series) {
  std::string out = "n,error\n";
  for (const auto& p : series.points) append_row(out, {std::to_string(p.n), format_double(p.error)});
  return out;
}

std::string edgeworth_csv(const std::vector<EdgeworthPoint>& points) {
  std::string out = "n,sup_residual,scaled_residual\n";
  for (const auto& p : points)
    append_row(out, {std::to_string(p.n), format_double(p.sup_residual),
                     format_double(p.scaled_residual)});
  return out;
}

std::string dump_json(const json& j) { return j.dump(4) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace clt
