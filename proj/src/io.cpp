#include "discordlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "discordlab/error.hpp"

#ifndef DISCORDLAB_VERSION
#define DISCORDLAB_VERSION "0.0.0"
#endif

namespace discordlab {

namespace {

[[noreturn]] void bad_input(const std::string& what) { throw Error(ErrorCode::BadInput, what); }

const Json& field(const Json& j, const char* name, const char* what) {
  if (!j.is_object()) bad_input(std::string(what) + ": expected a JSON object");
  const auto it = j.find(name);
  if (it == j.end()) bad_input(std::string(what) + ": missing field '" + name + "'");
  return *it;
}

ComplexMatrix read_square(const Json& re, const Json& im, int dim) {
  auto check = [dim](const Json& a, const char* name) {
    if (!a.is_array() || static_cast<int>(a.size()) != dim)
      bad_input(std::string("density matrix: field '") + name + "' must have " + std::to_string(dim) + " rows");
    for (const auto& row : a) {
      if (!row.is_array() || static_cast<int>(row.size()) != dim)
        bad_input(std::string("density matrix: field '") + name + "' rows must have " + std::to_string(dim) + " entries");
      for (const auto& v : row)
        if (!v.is_number()) bad_input(std::string("density matrix: field '") + name + "' holds a non-number");
    }
  };
  check(re, "re");
  check(im, "im");
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = cd(re[r][c].get<double>(), im[r][c].get<double>());
  return m;
}

}  // namespace

const char* version() { return DISCORDLAB_VERSION; }

Json to_json(const RunMeta& meta) {
  return Json{{"seed", meta.seed}, {"n_total", meta.n_total}, {"n_mc", meta.n_mc}, {"version", version()}};
}

Json to_json(const DensityMatrix& rho) {
  Json re = Json::array(), im = Json::array();
  for (int r = 0; r < rho.dim(); ++r) {
    Json rr = Json::array(), ir = Json::array();
    for (int c = 0; c < rho.dim(); ++c) {
      rr.push_back(rho(r, c).real());
      ir.push_back(rho(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return Json{{"dim", rho.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

DensityMatrix density_from_json(const Json& j) {
  const Json& dim = field(j, "dim", "density matrix");
  if (!dim.is_number_integer() || (dim.get<int>() != 2 && dim.get<int>() != 4))
    bad_input("density matrix: field 'dim' must be 2 or 4");
  const int d = dim.get<int>();
  return DensityMatrix(read_square(field(j, "re", "density matrix"), field(j, "im", "density matrix"), d));
}

Json to_json(const CountRecord& counts) {
  Json j{{"labels", counts.labels}, {"counts", counts.counts}, {"n_total", counts.n_total}};
  j["seed"] = counts.seed ? Json(*counts.seed) : Json(nullptr);
  return j;
}

CountRecord counts_from_json(const Json& j) {
  const Json& labels = field(j, "labels", "count record");
  const Json& counts = field(j, "counts", "count record");
  if (!labels.is_array()) bad_input("count record: field 'labels' must be an array");
  if (!counts.is_array()) bad_input("count record: field 'counts' must be an array");
  CountRecord r;
  for (const auto& l : labels) {
    if (!l.is_string()) bad_input("count record: field 'labels' holds a non-string");
    r.labels.push_back(l.get<std::string>());
  }
  for (const auto& c : counts) {
    if (!c.is_number_integer()) bad_input("count record: field 'counts' holds a non-integer");
    r.counts.push_back(c.get<std::int64_t>());
  }
  if (const auto it = j.find("seed"); it != j.end() && !it->is_null()) {
    if (!it->is_number_unsigned()) bad_input("count record: field 'seed' must be a non-negative integer or null");
    r.seed = it->get<std::uint64_t>();
  }
  const auto it = j.find("n_total");
  if (it == j.end()) return make_count_record(std::move(r.labels), std::move(r.counts), r.seed);
  if (!it->is_number_integer()) bad_input("count record: field 'n_total' must be an integer");
  r.n_total = it->get<std::int64_t>();
  validate(r);
  return r;
}

Json to_json(const MeasurementAxis& axis) { return Json{{"theta", axis.theta}, {"phi", axis.phi}}; }

Json to_json(const DiscordEstimate& e) {
  Json j{{"method", to_string(e.method)},
         {"discord", e.discord},
         {"mutual_info", e.mutual_info},
         {"classical_corr", e.classical_corr}};
  if (e.optimal_axis) j["optimal_axis"] = to_json(*e.optimal_axis);
  if (e.fitted_p) j["fitted_p"] = *e.fitted_p;
  j["degenerate"] = e.degenerate;
  j["clamped"] = e.clamped;
  return j;
}

Json to_json(const UncertainValue& u) {
  return Json{{"quantity", u.quantity}, {"mean", u.mean}, {"std", u.std}, {"n_samples", u.n_samples}};
}

Json diagnostics_json(const ReconstructionResult& r) {
  return Json{{"final_objective", r.final_loglike},
              {"iterations", r.iterations},
              {"evaluations", r.evaluations},
              {"restarts_used", r.restarts_used},
              {"converged", r.converged}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad_input("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    bad_input("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string format_sig6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string CsvTable::render(const RunMeta& meta) const {
  std::ostringstream os;
  os << "# seed=" << meta.seed << ",n_total=" << meta.n_total << ",n_mc=" << meta.n_mc << ",version=" << version()
     << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::BadInput, "cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace discordlab
