#include <filesystem>
#include <sstream>

#include "pmelab/error.hpp"
#include "pmelab/run.hpp"

namespace fs = std::filesystem;

namespace pmelab {

namespace {

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return csv_number(v.get<double>());
  if (v.is_null()) return "";
  return v.dump();
}

std::string curve_file(const std::string& check, const std::string& curve) {
  std::string s = check + "__" + curve;
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  return s + ".csv";
}

}  // namespace

std::vector<std::string> write_report(const std::string& manifest_path, const std::string& format,
                                      const std::string& out_dir) {
  if (!fs::exists(manifest_path)) throw Error(ErrorCode::MissingArtifact, "no manifest at " + manifest_path);
  const Json manifest = Json::parse(read_file(manifest_path));
  const fs::path run_dir = fs::path(manifest_path).parent_path();
  const fs::path report_path = run_dir / manifest.value("report", "report.json");
  if (!fs::exists(report_path)) throw Error(ErrorCode::MissingArtifact, "no report at " + report_path.string());
  for (const auto& a : manifest.at("artifacts"))
    if (!fs::exists(run_dir / a.get<std::string>()))
      throw Error(ErrorCode::MissingArtifact, "listed artifact missing: " + a.get<std::string>());
  const Json report = Json::parse(read_file(report_path.string()));
  const fs::path dir = out_dir.empty() ? run_dir / ("report-" + format) : fs::path(out_dir);
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& body) {
    write_file((dir / name).string(), body);
    written.push_back((dir / name).string());
  };

  if (format == "json") {
    Json tree{{"scenario", report.at("scenario")},
              {"hash", report.at("hash")},
              {"summary", report.at("summary")},
              {"checks", report.at("checks")},
              {"verdicts", manifest.at("verdicts")},
              {"versions", manifest.at("versions")}};
    emit("verdicts.json", canonical_dump(tree));
  } else if (format == "csv") {
    std::ostringstream os;
    os << "name,kind,pass,key,value\n";
    for (const auto& c : report.at("checks")) {
      const std::string name = c.at("name").get<std::string>();
      const std::string kind = c.at("kind").get<std::string>();
      const std::string pass = c.at("pass").get<bool>() ? "true" : "false";
      for (auto it = c.at("detail").begin(); it != c.at("detail").end(); ++it) {
        if (it.value().is_structured()) continue;
        os << csv_field(name) << "," << csv_field(kind) << "," << pass << "," << csv_field(it.key()) << ","
           << csv_field(scalar_text(it.value())) << "\n";
      }
    }
    emit("checks.csv", os.str());
    for (const auto& c : report.at("checks"))
      if (c.contains("samples_csv")) {
        const std::string rel = c.at("samples_csv").get<std::string>();
        emit(fs::path(rel).filename().string(), read_file((run_dir / rel).string()));
      }
  } else if (format == "plotdata") {
    for (const auto& c : report.at("checks")) {
      const std::string name = c.at("name").get<std::string>();
      for (auto it = c.at("series").begin(); it != c.at("series").end(); ++it) {
        const Json& x = it.value().at("x");
        const Json& y = it.value().at("y");
        std::ostringstream os;
        os << "x,y\n";
        for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
          os << scalar_text(x[i]) << "," << scalar_text(y[i]) << "\n";
        emit(curve_file(name, it.key()), os.str());
      }
    }
  } else {
    throw Error(ErrorCode::ConfigError, "format: expected json, csv or plotdata, got '" + format + "'");
  }
  return written;
}

}  // namespace pmelab
