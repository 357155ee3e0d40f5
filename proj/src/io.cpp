#include "minimaxlab/io.hpp"

#include "minimaxlab/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace minimaxlab::io {

namespace {

void write_string(std::ostream& os, const std::string& s) {
  // Reuse the library's escaping for strings.
  os << Json(s).dump();
}

void write(std::ostream& os, const Json& j, int indent, int depth) {
  const std::string pad = indent >= 0 ? std::string(static_cast<std::size_t>(indent) * (depth + 1), ' ') : "";
  const std::string close_pad = indent >= 0 ? std::string(static_cast<std::size_t>(indent) * depth, ' ') : "";
  const char* nl = indent >= 0 ? "\n" : "";
  const char* colon = indent >= 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        write_string(os, it.key());
        os << colon;
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[' << nl;
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        write(os, e, indent, depth + 1);
      }
      os << nl << close_pad << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double d = j.get<double>();
      if (!std::isfinite(d)) {
        os << "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      os << buf;
      return;
    }
    default:
      os << j.dump();
  }
}

Mat matrix_from(const Json& j, const char* key) {
  if (j.is_number()) return Mat::Constant(1, 1, j.get<double>());
  if (!j.is_array() || j.empty()) throw Error(ErrorKind::Parse, std::string("'") + key + "' must be a nonempty matrix");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j.front().is_array() || j.front().empty())
    throw Error(ErrorKind::Parse, std::string("'") + key + "' rows must be nonempty arrays");
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) throw Error(ErrorKind::Parse, std::string("'") + key + "' rows must be arrays");
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(ErrorKind::DimensionMismatch, std::string("ragged matrix '") + key + "'");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_number()) throw Error(ErrorKind::Parse, std::string("non-numeric entry in '") + key + "'");
      m(r, c) = e.get<double>();
    }
  }
  return m;
}

Vec vector_from(const Json& j, const char* key) {
  if (j.is_number()) return Vec::Constant(1, j.get<double>());
  if (!j.is_array()) throw Error(ErrorKind::Parse, std::string("'") + key + "' must be an array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorKind::Parse, std::string("non-numeric entry in '") + key + "'");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Json concept_json(const SolutionConcept& s) {
  return {{"exists", s.exists}, {"set", to_json(s.set)}, {"description", s.description}};
}

Json evidence_json(const Evidence& e) {
  return {{"stage", e.stage}, {"eps", e.eps},          {"margin", e.margin},
          {"witness_x", to_json(e.witness_x)}, {"witness_y", to_json(e.witness_y)}, {"notes", e.notes}};
}

}  // namespace

std::string canonical_dump(const Json& j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  return os.str();
}

QuadraticGame game_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Parse, "game must be a JSON object");
  for (const char* key : {"A", "B", "C"})
    if (!j.contains(key)) throw Error(ErrorKind::Parse, std::string("missing '") + key + "'");
  QuadraticGame g;
  g.A = matrix_from(j.at("A"), "A");
  g.B = matrix_from(j.at("B"), "B");
  g.C = matrix_from(j.at("C"), "C");
  g.a = j.contains("a") ? vector_from(j.at("a"), "a") : Vec::Zero(g.A.rows());
  g.b = j.contains("b") ? vector_from(j.at("b"), "b") : Vec::Zero(g.B.rows());
  if (j.contains("c")) {
    if (!j.at("c").is_number()) throw Error(ErrorKind::Parse, "'c' must be a number");
    g.c = j.at("c").get<double>();
  }
  g.validate();
  return g;
}

QuadraticGame game_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
  return game_from_json(j);
}

Json to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vec(m.row(r).transpose())));
  return out;
}

Json to_json(const CVec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(Json::array({v(i).real(), v(i).imag()}));
  return out;
}

Json to_json(const QuadraticGame& g) {
  return {{"A", to_json(g.A)}, {"B", to_json(g.B)}, {"C", to_json(g.C)},
          {"a", to_json(g.a)}, {"b", to_json(g.b)}, {"c", g.c}};
}

Json to_json(const AffineSet& s) {
  if (s.empty) return {{"empty", true}};
  Json basis = Json::array();
  for (Eigen::Index c = 0; c < s.basis.cols(); ++c) basis.push_back(to_json(Vec(s.basis.col(c))));
  return {{"empty", false}, {"basepoint", to_json(s.basepoint)}, {"basis", basis}, {"dimension", s.dimension()}};
}

Json to_json(const ClassificationReport& r) {
  Json trace = Json::array();
  for (const auto& c : r.condition_trace) trace.push_back({{"name", c.name}, {"holds", c.holds}, {"witness", c.witness}});
  Json lrp = concept_json(r.lrp);
  lrp["neighborhood_note"] = r.lrp_neighborhood_note;
  return {{"stationary", to_json(r.stationary)},
          {"global_minimax", concept_json(r.global_minimax)},
          {"local_minimax", concept_json(r.local_minimax)},
          {"global_maximin", concept_json(r.global_maximin)},
          {"local_maximin", concept_json(r.local_maximin)},
          {"saddle", concept_json(r.saddle)},
          {"lrp", lrp},
          {"condition_trace", trace}};
}

Json to_json(const VerifyResult& r) {
  return {{"verdict", to_string(r.verdict)}, {"evidence", evidence_json(r.evidence)}};
}

Json to_json(const SecondOrderReport& r) {
  Json out = {{"grad_norm", r.grad_norm},
              {"yy_definiteness", linalg::to_string(r.yy_definiteness)},
              {"yy_invertible", r.yy_invertible},
              {"verdict", to_string(r.verdict)}};
  if (r.yy_invertible) {
    out["schur_complement"] = to_json(r.schur_complement);
    out["schur_definiteness"] = linalg::to_string(r.schur_definiteness);
  }
  return out;
}

Json to_json(const StabilityVerdict& v) {
  Json out = {{"eigenvalues", to_json(v.eigenvalues)},
              {"stable", v.stable},
              {"predicate_stable", v.predicate_stable},
              {"spectral_radius_of_update", v.spectral_radius_of_update},
              {"method", to_string(v.method)},
              {"agreement", v.agreement},
              {"marginal", v.marginal},
              {"marginal_flags", v.marginal_flags},
              {"per_eigenvalue_pass", v.per_eigenvalue_pass},
              {"warnings", v.warnings}};
  if (!v.char_poly.empty()) out["char_poly"] = v.char_poly;
  return out;
}

Json to_json(const TrajectoryRecord& t) {
  Json iterates = Json::array();
  for (const auto& z : t.iterates) iterates.push_back(to_json(z));
  Json out = {{"iterates", iterates},
              {"vector_field_norms", t.vector_field_norms},
              {"converged", t.converged},
              {"diverged", t.diverged},
              {"iterations_used", t.iterations_used}};
  if (t.final_distance_to_target) out["final_distance_to_target"] = *t.final_distance_to_target;
  return out;
}

}  // namespace minimaxlab::io
