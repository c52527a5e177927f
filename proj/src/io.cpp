#include "zigzag/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

namespace zz {

using nlohmann::json;

namespace {

json vec(const VectorXr& v) { return std::vector<Real>(v.data(), v.data() + v.size()); }

VectorXr vec_from(const json& j) {
  const auto v = j.get<std::vector<Real>>();
  return Eigen::Map<const VectorXr>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json cplx(Complex z) { return json::array({z.real(), z.imag()}); }

json require(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("solution file lacks field '") + key + "'");
  return j.at(key);
}

}  // namespace

json record_to_json(const SolutionRecord& rec) {
  json trace = json::array();
  for (const auto& row : rec.trace) {
    trace.push_back({row.step, row.height, row.gradient_norm, row.stratum_distance});
  }
  return {
      {"genus", rec.zigzag.genus},
      {"turn_order", rec.zigzag.turn_order},
      {"side_lengths", vec(rec.zigzag.side_lengths)},
      {"prevertices_ne", vec(rec.prev_ne.positive())},
      {"prevertices_sw", vec(rec.prev_sw.positive())},
      {"extremal_lengths_ne", vec(rec.e_ne)},
      {"extremal_lengths_sw", vec(rec.e_sw)},
      {"height", rec.height},
      {"converged", rec.converged},
      {"trace", trace},
  };
}

SolutionRecord record_from_json(const json& j) {
  try {
    SolutionRecord rec;
    const int genus = require(j, "genus").get<int>();
    const int k = require(j, "turn_order").get<int>();
    rec.zigzag = genus <= 1 ? ZigzagParams::base(genus, k)
                            : ZigzagParams::make(genus, k, vec_from(require(j, "side_lengths")));
    rec.prev_ne = Prevertices::from_positive(vec_from(require(j, "prevertices_ne")));
    rec.prev_sw = Prevertices::from_positive(vec_from(require(j, "prevertices_sw")));
    rec.e_ne = vec_from(require(j, "extremal_lengths_ne"));
    rec.e_sw = vec_from(require(j, "extremal_lengths_sw"));
    rec.height = require(j, "height").get<Real>();
    rec.converged = require(j, "converged").get<bool>();
    if (j.contains("trace")) {
      for (const auto& row : j.at("trace")) {
        rec.trace.push_back({row.at(0).get<int>(), row.at(1).get<Real>(), row.at(2).get<Real>(),
                             row.at(3).get<Real>()});
      }
    }
    if (rec.prev_ne.genus() != genus || rec.prev_sw.genus() != genus) {
      throw FormatError("prevertex count does not match genus");
    }
    return rec;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed solution file: ") + e.what());
  }
}

json solution_document(const SolutionRecord& rec, const WeierstrassData* wd) {
  json doc = {{"schema_version", kSchemaVersion}, {"record", record_to_json(rec)}};
  if (!rec.trace.empty()) {
    Real min_distance = std::numeric_limits<Real>::infinity();
    for (const auto& row : rec.trace) min_distance = std::min(min_distance, row.stratum_distance);
    doc["trace_summary"] = {{"steps", rec.trace.size()},
                            {"initial_height", rec.trace.front().height},
                            {"final_height", rec.trace.back().height},
                            {"min_stratum_distance", min_distance}};
  }
  if (wd != nullptr) {
    doc["weierstrass"] = {{"prevertices", vec(wd->prevertices.positive())},
                          {"A", cplx(wd->a)},
                          {"B", cplx(wd->b)},
                          {"c", cplx(wd->c)}};
  }
  return doc;
}

json partial_document(const Ladder& ladder) {
  json rungs = json::array();
  for (const auto& rec : ladder.records) rungs.push_back(record_to_json(rec));
  return {{"schema_version", kSchemaVersion},
          {"partial", true},
          {"failed_genus", ladder.failed_genus},
          {"message", ladder.message},
          {"ladder", rungs}};
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << doc.dump(2) << "\n";
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

SolutionRecord load_solution(const std::string& path) {
  const json doc = read_json(path);
  const int version = doc.value("schema_version", -1);
  if (version != kSchemaVersion) throw FormatError(path + ": unsupported schema version");
  if (doc.value("partial", false)) throw FormatError(path + ": partial ladder, no solution");
  return record_from_json(require(doc, "record"));
}

void write_obj(std::ostream& out, const SurfaceMesh& mesh) {
  out << std::setprecision(std::numeric_limits<Real>::max_digits10);
  out << "# half-plane sheet; symmetry group order " << mesh.symmetry_order << "\n";
  for (const auto& s : mesh.symmetries) {
    out << "# sym " << s.kind << " point " << s.point.x() << " " << s.point.y() << " "
        << s.point.z() << " dir " << s.direction.x() << " " << s.direction.y() << " "
        << s.direction.z() << " from " << s.source << "\n";
  }
  const Matrix3r& d = mesh.diagonal_symmetry;
  out << "# sym linear";
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out << " " << d(r, c);
  }
  out << " from t -> -conj(t)\n";
  for (const auto& v : mesh.vertices) out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
  for (const auto& t : mesh.triangles) {
    out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
  }
}

void write_obj(const std::string& path, const SurfaceMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  write_obj(out, mesh);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<Real>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n" << std::setprecision(17);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

}  // namespace zz
