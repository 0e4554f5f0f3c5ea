#include "phasespace/cli/output.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "phasespace/errors.hpp"
#include "phasespace/su11.hpp"

namespace phasespace::cli {

namespace {

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void put(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

}  // namespace

std::string csv_text(const DistributionField& field) {
  std::string out = "re_alpha,im_alpha,phi\n";
  out.reserve(out.size() + field.values.size() * 72);
  char line[128];
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const Complex p = field.grid.point(i);
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", p.real(), p.imag(), field.values[i]);
    out += line;
  }
  return out;
}

std::string tag(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

OutputSink::OutputSink(std::filesystem::path dir, const ScenarioConfig& config)
    : dir_(std::move(dir)), config_(config), arbitration_(nlohmann::json::array()) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory '" + dir_.string() + "': " + ec.message());
  for (const TransformArbitration& t : arbitrate_transforms(100, 20240601)) {
    arbitration_.push_back({{"transform", t.transform},
                            {"samples", t.samples},
                            {"printed_max_deviation", t.printed_max_deviation},
                            {"implemented_max_deviation", t.implemented_max_deviation},
                            {"printed_agrees", t.printed_agrees},
                            {"implemented_agrees", t.implemented_agrees},
                            {"note", t.note}});
  }
}

void OutputSink::write_field(const std::string& name, const DistributionField& field, nlohmann::json extra) {
  const std::string csv = csv_text(field);
  put(dir_ / name, csv);
  compare_golden(name, csv);

  nlohmann::json meta = {
      {"file", name},
      {"version", kVersion},
      {"config_hash", hex(config_.hash)},
      {"order", field.order.value()},
      {"source", field.provenance.source},
      {"time", field.provenance.time},
      {"method", std::string(method_name(field.provenance.method))},
      {"grid", {{"half_width", field.grid.half_width()}, {"points", field.grid.points()}}},
      {"cutoff", config_.cutoff},
      {"max_imag_residue", field.max_imag_residue},
      {"certified", field.certified},
      {"tolerances",
       {{"closed_vs_oracle", 1e-7}, {"evolution_vs_oracle", 1e-6}, {"imag_residue", 1e-10}, {"normalization", 5e-3}}},
      {"arbitration", arbitration_},
  };
  if (!extra.is_null())
    for (auto& [k, v] : extra.items()) meta[k] = v;
  put(dir_ / (name + ".meta.json"), meta.dump(2) + "\n");
}

void OutputSink::write_text(const std::string& name, const std::string& text) { put(dir_ / name, text); }

void OutputSink::compare_golden(const std::string& name, const std::string& text) {
  const char* golden = std::getenv("PHASESPACE_GOLDEN_DIR");
  if (golden == nullptr || *golden == '\0') return;
  const std::filesystem::path path = std::filesystem::path(golden) / name;
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::ostringstream expected;
  expected << in.rdbuf();
  if (expected.str() != text) mismatches_.push_back(name);
}

}  // namespace phasespace::cli
