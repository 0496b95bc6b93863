#include "maskforge/io.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "maskforge/error.hpp"

namespace maskforge::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw MaskError(ErrorKind::Parse, what); }

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

long long integer_from_json(const json& j) {
  if (!j.is_number_integer()) parse_fail("expected an integer, got " + j.dump());
  return j.get<long long>();
}

IntVec int_vec_from_json(const json& j, std::size_t dim) {
  if (!j.is_array()) parse_fail("expected an integer array, got " + j.dump());
  IntVec v;
  for (const auto& x : j) v.push_back(integer_from_json(x));
  if (v.size() != dim) parse_fail("vector " + j.dump() + " does not have length " + std::to_string(dim));
  return v;
}

std::vector<IntVec> digit_list_from_json(const json& j, std::size_t dim) {
  if (!j.is_array()) parse_fail("digit list must be an array");
  std::vector<IntVec> out;
  for (const auto& v : j) out.push_back(int_vec_from_json(v, dim));
  return out;
}

IntMatrix matrix_from_json(const json& j, std::size_t dim) {
  if (!j.is_array()) parse_fail("dilation must be an array");
  std::vector<long long> a;
  if (!j.empty() && j.front().is_array()) {
    if (j.size() != dim) parse_fail("dilation must have " + std::to_string(dim) + " rows");
    for (const auto& row : j) {
      IntVec r = int_vec_from_json(row, dim);
      a.insert(a.end(), r.begin(), r.end());
    }
  } else {
    a = int_vec_from_json(j, dim * dim);
  }
  return IntMatrix(dim, std::move(a));
}

TrigPoly coefficient_list(const json& j, std::size_t dim, long long denominator, bool allow_empty) {
  if (!j.is_array()) parse_fail("coefficients must be an array");
  if (j.empty() && !allow_empty) parse_fail("mask has no coefficients");
  TrigPoly::Terms terms;
  for (const auto& e : j) {
    IntVec freq = int_vec_from_json(member(e, "freq"), dim);
    Cyclotomic value = cyclotomic_from_json(member(e, "value"));
    if (!terms.emplace(freq, std::move(value)).second) parse_fail("duplicate frequency " + member(e, "freq").dump());
  }
  return TrigPoly(dim, std::move(terms), denominator);
}

json tuple_json(std::size_t flat, std::size_t dim, int order) {
  json t = json::array();
  for (std::size_t x : tuple_of(flat, dim, order)) t.push_back(x + 1);
  return t;
}

json trajectory_json(const std::vector<NormStep>& steps) {
  json arr = json::array();
  for (const auto& s : steps) arr.push_back({{"L", s.L}, {"value", to_json(s.value)}, {"below_one", s.below_one}});
  return arr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  return cells;
}

}  // namespace

json to_json(const Cyclotomic& c) {
  if (c.is_rational()) return to_string(c.rational_value());
  json coords = json::array();
  for (const auto& x : c.coords()) coords.push_back(to_string(x));
  return {{"order", c.order()}, {"coords", coords}};
}

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return make_rational(j.get<long long>());
  parse_fail("expected a rational \"p/q\", got " + j.dump());
}

Cyclotomic cyclotomic_from_json(const json& j) {
  if (!j.is_object()) return Cyclotomic(rational_from_json(j));
  const long long order = integer_from_json(member(j, "order"));
  if (order < 1) parse_fail("cyclotomic order must be positive");
  const json& coords = member(j, "coords");
  if (!coords.is_array() || coords.size() != static_cast<std::size_t>(order)) {
    parse_fail("cyclotomic coords must have length equal to the order");
  }
  std::vector<Rational> v;
  for (const auto& x : coords) v.push_back(rational_from_json(x));
  return Cyclotomic::from_coords(order, std::move(v));
}

json to_json(const TrigPoly& t) {
  json coeffs = json::array();
  for (const auto& [n, c] : t.terms()) coeffs.push_back({{"freq", n}, {"value", to_json(c)}});
  json j = {{"coefficients", coeffs}};
  if (t.denominator() != 1) j["denominator"] = t.denominator();
  return j;
}

TrigPoly trigpoly_from_json(const json& j, std::size_t dim) {
  long long q = 1;
  if (j.contains("denominator")) q = integer_from_json(j.at("denominator"));
  if (q < 1) parse_fail("denominator must be positive");
  return coefficient_list(member(j, "coefficients"), dim, q, true);
}

json to_json(const LambdaTable& table) {
  json values = json::array();
  for (const auto& [beta, v] : table.values) values.push_back({{"beta", beta}, {"value", to_json(v)}});
  return {{"order", table.order}, {"dim", table.dim}, {"values", values}};
}

LambdaTable lambda_table_from_json(const json& j) {
  LambdaTable t;
  t.order = static_cast<int>(integer_from_json(member(j, "order")));
  t.dim = static_cast<std::size_t>(integer_from_json(member(j, "dim")));
  for (const auto& e : member(j, "values")) {
    IntVec b = int_vec_from_json(member(e, "beta"), t.dim);
    t.values.emplace(MultiIndex(b.begin(), b.end()), cyclotomic_from_json(member(e, "value")));
  }
  for (const auto& beta : multi_indices_up_to(t.dim, t.order)) {
    if (!t.values.count(beta)) parse_fail("lambda table is incomplete");
  }
  return t;
}

MaskFile mask_file_from_json(const json& j) {
  if (!j.is_object()) parse_fail("mask file must be a JSON object");
  MaskFile f;
  const long long dim = integer_from_json(member(j, "dim"));
  if (dim < 1) parse_fail("dim must be positive");
  f.dim = static_cast<std::size_t>(dim);
  f.dilation = matrix_from_json(member(j, "dilation"), f.dim);
  if (j.contains("digits")) f.digits = digit_list_from_json(j.at("digits"), f.dim);
  if (j.contains("dual_digits")) f.dual_digits = digit_list_from_json(j.at("dual_digits"), f.dim);
  const bool has_coeffs = j.contains("coefficients");
  const bool has_poly = j.contains("polyphase");
  if (has_coeffs == has_poly) parse_fail("give exactly one of \"coefficients\" or \"polyphase\"");
  if (has_coeffs) {
    f.mask = coefficient_list(j.at("coefficients"), f.dim, 1, false);
    if (f.mask.is_zero()) parse_fail("mask is zero");
    return f;
  }
  if (!f.digits) parse_fail("polyphase form requires \"digits\"");
  const json& parts = j.at("polyphase");
  if (!parts.is_array() || parts.empty()) parse_fail("polyphase must be a nonempty array");
  std::vector<TrigPoly> taus(f.digits->size(), TrigPoly(f.dim));
  std::set<long long> seen;
  for (const auto& p : parts) {
    const long long idx = integer_from_json(member(p, "digit"));
    if (idx < 0 || idx >= static_cast<long long>(taus.size())) parse_fail("polyphase digit index out of range");
    if (!seen.insert(idx).second) parse_fail("polyphase digit index repeated");
    taus[static_cast<std::size_t>(idx)] = coefficient_list(member(p, "coefficients"), f.dim, 1, true);
  }
  f.polyphase = std::move(taus);
  return f;
}

DilationContext MaskFile::context() {
  DilationContext ctx = DilationContext::create(dilation, digits, dual_digits);
  if (polyphase) {
    mask = polyphase_assemble(*polyphase, ctx);
    if (mask.is_zero()) throw MaskError(ErrorKind::Parse, "mask is zero");
  }
  return ctx;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    parse_fail(path + ": " + e.what());
  }
}

MaskFile load_mask_file(const std::string& path) {
  try {
    return mask_file_from_json(read_json_file(path));
  } catch (const json::exception& e) {
    parse_fail(path + ": " + e.what());
  }
}

json to_json(const MaskFile& file, const DilationContext& ctx) {
  return {{"dim", file.dim},
          {"dilation", ctx.matrix().row_major()},
          {"digits", ctx.digits()},
          {"dual_digits", ctx.dual_digits()},
          {"coefficients", to_json(file.mask).at("coefficients")}};
}

json to_json(const IteratedDecomposition& it) {
  json entries = json::array();
  for (std::size_t j = 0; j < it.entries.size(); ++j)
    for (std::size_t k = 0; k < it.entries[j].size(); ++k) {
      entries.push_back({{"j", tuple_json(j, it.dim, it.order)},
                         {"k", tuple_json(k, it.dim, it.order)},
                         {"mask", to_json(it.entries[j][k])}});
    }
  return {{"order", it.order}, {"dim", it.dim}, {"entries", entries}, {"achieved_class", it.class_guarantee}};
}

IteratedDecomposition iterated_from_json(const json& j, std::size_t dim) {
  IteratedDecomposition it;
  it.dim = dim;
  it.order = static_cast<int>(integer_from_json(member(j, "order")));
  if (it.order < 1) parse_fail("decomposition order must be positive");
  it.class_guarantee = static_cast<int>(integer_from_json(member(j, "achieved_class")));
  std::size_t size = 1;
  for (int i = 0; i < it.order; ++i) size *= dim;
  it.entries.assign(size, std::vector<TrigPoly>(size, TrigPoly(dim)));
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : member(j, "entries")) {
    auto index = [&](const char* key) {
      IntVec t = int_vec_from_json(member(e, key), static_cast<std::size_t>(it.order));
      std::vector<std::size_t> tuple;
      for (long long x : t) {
        if (x < 1 || x > static_cast<long long>(dim)) parse_fail("tuple entry out of range");
        tuple.push_back(static_cast<std::size_t>(x - 1));
      }
      return flat_of(tuple, dim);
    };
    const std::size_t jj = index("j");
    const std::size_t kk = index("k");
    if (!seen.insert({jj, kk}).second) parse_fail("repeated decomposition entry");
    it.entries[jj][kk] = trigpoly_from_json(member(e, "mask"), dim);
  }
  return it;
}

json to_json(const RationalInterval& iv) {
  return {{"lo", to_string(iv.lo)}, {"hi", to_string(iv.hi)}, {"exact", iv.is_exact()}};
}

json to_json(const MatrixMask& mask) {
  json rows = json::array();
  for (std::size_t i = 0; i < mask.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < mask.cols(); ++j) row.push_back(to_json(mask(i, j)));
    rows.push_back(row);
  }
  return {{"rows", mask.rows()}, {"cols", mask.cols()}, {"entries", rows}};
}

json to_json(const IsotropyReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"eigenvalue_moduli", r.eigenvalue_moduli},
          {"max_similarity_product", to_string(r.max_similarity_product)},
          {"probe_depth", r.probe_depth}};
}

json to_json(const ConvergenceReport& r) {
  json j = {{"verdict", to_string(r.verdict)},
            {"t0", to_json(r.t0)},
            {"normalized", r.normalized},
            {"in_z0", r.in_z0},
            {"certificate_L", r.certificate ? json(*r.certificate) : json(nullptr)},
            {"trajectory", trajectory_json(r.trajectory)},
            {"reasons", r.reasons}};
  if (r.T) j["T"] = to_json(*r.T);
  return j;
}

json to_json(const SmoothnessReport& r) {
  json j = {{"verdict", to_string(r.verdict)},
            {"isotropy", to_json(r.isotropy)},
            {"in_z1", r.in_z1},
            {"normalized", r.normalized},
            {"convergence", to_json(r.convergence)},
            {"certificate_L", r.certificate ? json(*r.certificate) : json(nullptr)},
            {"trajectory", trajectory_json(r.trajectory)},
            {"reasons", r.reasons}};
  if (r.Q) j["Q"] = to_json(*r.Q);
  return j;
}

Sequence read_sequence_csv(std::istream& in, std::size_t dim) {
  Sequence f;
  f.dim = dim;
  f.width = 0;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cells = split_csv(t);
    if (first) {
      first = false;
      bool header = false;
      try {
        parse_rational(cells.front());
      } catch (const MaskError&) {
        header = true;
      }
      if (header) continue;
    }
    if (cells.size() <= dim) {
      throw MaskError(ErrorKind::ShapeMismatch, "line " + std::to_string(line_no) + ": expected " +
                                                    std::to_string(dim) + " index columns and at least one value");
    }
    const std::size_t width = cells.size() - dim;
    if (f.width == 0) f.width = width;
    if (width != f.width) throw MaskError(ErrorKind::ShapeMismatch, "line " + std::to_string(line_no) + ": inconsistent width");
    IntVec alpha(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const Rational v = parse_rational(cells[i]);
      if (v.get_den() != 1 || !v.get_num().fits_slong_p()) parse_fail("line " + std::to_string(line_no) + ": index must be an integer");
      alpha[i] = v.get_num().get_si();
    }
    if (f.values.count(alpha)) parse_fail("line " + std::to_string(line_no) + ": repeated index");
    for (std::size_t c = 0; c < width; ++c) f.add(alpha, c, parse_rational(cells[dim + c]));
    f.values.try_emplace(alpha, RatVec(width));
  }
  if (f.width == 0) throw MaskError(ErrorKind::ShapeMismatch, "sequence has no rows");
  f.prune();
  return f;
}

void write_refined_csv(std::ostream& out, const std::vector<RefinedSample>& samples, std::size_t dim) {
  const std::size_t width = samples.empty() ? 1 : samples.front().value.size();
  for (std::size_t i = 0; i < dim; ++i) out << (i ? "," : "") << "x" << i + 1;
  for (std::size_t i = 0; i < width; ++i) out << ",v" << i + 1;
  out << "\n";
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < dim; ++i) out << (i ? "," : "") << to_string(s.point[i]);
    for (const auto& v : s.value) out << "," << to_string(v);
    out << "\n";
  }
}

}  // namespace maskforge::io
