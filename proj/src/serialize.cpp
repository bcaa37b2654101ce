#include "mms/serialize.hpp"

#include <fstream>
#include <sstream>

#include "mms/errors.hpp"

namespace mms {

namespace {

template <typename Derived>
Json integer_matrix(const Eigen::MatrixBase<Derived>& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json integer_list(const std::vector<Integer>& xs) {
  Json out = Json::array();
  for (auto& x : xs) out.push_back(to_string(x));
  return out;
}

// Rows x cols from a list of lists of strings; cols is needed when rows == 0.
MatZ read_integer_matrix(const Json& doc, Index rows, Index cols) {
  if (!doc.is_array() || static_cast<Index>(doc.size()) != rows) throw InvalidInput("matrix has wrong row count");
  MatZ m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = doc[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw InvalidInput("matrix has wrong column count");
    for (Index j = 0; j < cols; ++j) m(i, j) = parse_integer(row[j].get<std::string>());
  }
  return m;
}

void expect(bool ok, const std::string& what) {
  if (!ok) throw InvalidInput("serialized space differs from rebuild: " + what);
}

}  // namespace

Json space_to_json(const SymbolSpace& space) {
  Json doc;
  doc["family"] = family_name(space.spec().family);
  doc["level"] = space.spec().level;
  Json cosets = Json::array();
  for (auto& g : space.cosets().reps())
    cosets.push_back({to_string(g.a()), to_string(g.b()), to_string(g.c()), to_string(g.d())});
  doc["cosets"] = std::move(cosets);
  Json cusps = Json::array();
  for (auto& c : space.cusps().classes())
    cusps.push_back({{"rep", to_string(c.rep.p) + "/" + to_string(c.rep.q)}, {"width", c.width}});
  doc["cusps"] = std::move(cusps);
  doc["basis_rank"] = space.rank();
  doc["project"] = integer_matrix(space.quotient().project);
  doc["lift"] = integer_matrix(space.quotient().lift);
  doc["pi"] = integer_matrix(space.pi());
  doc["boundary"] = integer_matrix(space.boundary());
  doc["torsion"] = integer_list(space.quotient().torsion);
  return doc;
}

SymbolSpace space_from_json(const Json& doc) {
  try {
    SymbolSpace space = build_space(make_spec(parse_family(doc.at("family").get<std::string>()), doc.at("level").get<long>()));
    const Index r = space.rank(), n = static_cast<Index>(space.num_generators());
    expect(doc.at("basis_rank").get<Index>() == r, "basis_rank");
    Json fresh = space_to_json(space);
    for (const char* key : {"cosets", "cusps", "torsion"}) expect(doc.at(key) == fresh[key], key);
    expect(read_integer_matrix(doc.at("project"), r, n) == space.quotient().project, "project");
    expect(read_integer_matrix(doc.at("lift"), n, r) == space.quotient().lift, "lift");
    expect(read_integer_matrix(doc.at("pi"), space.pi().rows(), r) == space.pi(), "pi");
    expect(read_integer_matrix(doc.at("boundary"), space.boundary().rows(), r) == space.boundary(), "boundary");
    return space;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed space document: ") + e.what());
  } catch (const InvalidSpec& e) {
    throw InvalidInput(e.what());
  }
}

Json operator_to_json(const OperatorMatrix& op) {
  Json doc;
  doc["name"] = op.name;
  doc["denominator"] = to_string(op.denominator);
  Json rows = Json::array();
  for (Index i = 0; i < op.mat.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < op.mat.cols(); ++j) row.push_back(to_string(op.mat(i, j)));
    rows.push_back(std::move(row));
  }
  doc["matrix"] = std::move(rows);
  return doc;
}

OperatorMatrix operator_from_json(const Json& doc) {
  try {
    const Json& rows = doc.at("matrix");
    const Index n = static_cast<Index>(rows.size());
    MatQ m(n, n);
    for (Index i = 0; i < n; ++i) {
      if (static_cast<Index>(rows[i].size()) != n) throw InvalidInput("operator matrix is not square");
      for (Index j = 0; j < n; ++j) m(i, j) = parse_rational(rows[i][j].get<std::string>());
    }
    OperatorMatrix op = make_operator(doc.at("name").get<std::string>(), m);
    if (to_string(op.denominator) != doc.at("denominator").get<std::string>())
      throw InvalidInput("operator denominator does not match its matrix");
    return op;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed operator document: ") + e.what());
  }
}

Json pairing_report_to_json(const SymbolSpace& space, const PerfectnessReport& report, bool g_identity) {
  Json doc;
  doc["family"] = family_name(space.spec().family);
  doc["level"] = space.spec().level;
  doc["det"] = (report.det >= 0 ? "+" : "") + to_string(report.det);
  doc["expected_det"] = to_string(report.expected_det);
  doc["elementary_divisors"] = integer_list(report.elementary_divisors);
  doc["perfect_over"] = report.perfect ? "Z[1/" + to_string(report.inverted) + "]" : "none";
  doc["G_identity"] = g_identity;
  return doc;
}

Json numeric_report_to_json(const NumericReport& r) {
  Json doc;
  doc["identity"] = r.identity;
  doc["pn"] = r.pn;
  doc["lhs"] = r.lhs.real();
  doc["rhs"] = r.rhs.real();
  if (r.lhs.imag() != 0 || r.rhs.imag() != 0) {
    doc["lhs_imag"] = r.lhs.imag();
    doc["rhs_imag"] = r.rhs.imag();
  }
  doc["rel_error"] = r.rel_error;
  doc["pass"] = r.pass;
  return doc;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out.flush()) throw IoError("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace mms
