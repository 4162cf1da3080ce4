#pragma once

// JSON model files.
//
//   {
//     "kind": "hmm" | "hqmm" | "vn" | "mps",
//     "name": "...", "source": "...",            (optional metadata)
//     "alphabet": ["0", "1", ...],
//     "dimension": d,                             (bond dimension for mps)
//     hmm:  "transitions": {symbol: matrix}, "initial": [p_0, ...]
//     hqmm: "kraus": {symbol: [matrix, ...]},    "initial": matrix
//     vn:   "projectors": {symbol: matrix}, "unitary": matrix, "initial": matrix
//     mps:  "physical_dimension": d, "tensors": [matrix, ...],
//           "projectors": {symbol: matrix}, "initial": matrix
//   }
//
// A matrix is an array of rows; an entry is a number or a [re, im] pair.
// "initial" is optional everywhere except that mps defaults to the maximally
// mixed bond state. A vn file loads as the equivalent hqmm.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "hqmm/classical.hpp"
#include "hqmm/mps.hpp"
#include "hqmm/quantum.hpp"

namespace hqmm::io {

using json = nlohmann::json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using AnyModel = std::variant<HmmModel, HqmmModel, MpsModel>;

struct ModelFile {
  std::string kind;  // as written in the file
  AnyModel model;
  std::string name;
  std::string source;
};

namespace detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw ParseError("field '" + path + "': " + what);
}

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

inline complex read_entry(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  fail(path, "expected a number or a [re, im] pair");
}

inline ComplexMatrix read_matrix(const json& v, const std::string& path, Eigen::Index rows, Eigen::Index cols) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows) {
    fail(path, "expected an array of " + std::to_string(rows) + " rows");
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = v[static_cast<std::size_t>(i)];
    const std::string rpath = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      fail(rpath, "expected a row of " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = read_entry(row[static_cast<std::size_t>(j)], rpath + "[" + std::to_string(j) + "]");
    }
  }
  return m;
}

inline RealMatrix read_real_matrix(const json& v, const std::string& path, Eigen::Index n) {
  ComplexMatrix c = read_matrix(v, path, n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (c(i, j).imag() != 0.0) {
        fail(path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]", "classical entries must be real");
      }
    }
  }
  return c.real();
}

inline Eigen::Index read_dimension(const json& doc, const std::string& key) {
  const json& v = require(doc, key, "");
  if (!v.is_number_integer() || v.get<long long>() <= 0) fail(key, "expected a positive integer");
  return static_cast<Eigen::Index>(v.get<long long>());
}

inline Alphabet read_alphabet(const json& doc) {
  const json& v = require(doc, "alphabet", "");
  if (!v.is_array() || v.empty()) fail("alphabet", "expected a non-empty array of symbol names");
  std::vector<std::string> symbols;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) fail("alphabet[" + std::to_string(i) + "]", "expected a string");
    symbols.push_back(v[i].get<std::string>());
  }
  try {
    return Alphabet(std::move(symbols));
  } catch (const std::invalid_argument& e) {
    fail("alphabet", e.what());
  }
}

/// Object keyed by every symbol of the alphabet, and nothing else.
template <class Fn>
void for_each_symbol(const json& obj, const std::string& path, const Alphabet& alphabet, Fn&& fn) {
  if (!obj.is_object()) fail(path, "expected an object keyed by symbol");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const auto& s : alphabet.symbols()) known = known || s == it.key();
    if (!known) fail(path + "." + it.key(), "symbol not in alphabet");
  }
  for (std::size_t s = 0; s < alphabet.size(); ++s) {
    fn(s, require(obj, alphabet[s], path), path + "." + alphabet[s]);
  }
}

inline std::optional<DensityMatrix> read_density(const json& doc, Eigen::Index d) {
  auto it = doc.find("initial");
  if (it == doc.end()) return std::nullopt;
  ComplexMatrix m = read_matrix(*it, "initial", d, d);
  auto report = DensityMatrix::check(m);
  if (!report.ok()) {
    ValidationReport r;
    r.merge(report, "initial");
    throw ValidationError(std::move(r));
  }
  return DensityMatrix(std::move(m));
}

inline HmmModel read_hmm(const json& doc) {
  HmmModel m;
  m.alphabet = read_alphabet(doc);
  const Eigen::Index d = read_dimension(doc, "dimension");
  m.transitions.resize(m.alphabet.size());
  for_each_symbol(require(doc, "transitions", ""), "transitions", m.alphabet,
                  [&](std::size_t s, const json& v, const std::string& path) {
                    m.transitions[s] = read_real_matrix(v, path, d);
                  });
  if (auto it = doc.find("initial"); it != doc.end()) {
    if (!it->is_array() || static_cast<Eigen::Index>(it->size()) != d) {
      fail("initial", "expected " + std::to_string(d) + " probabilities");
    }
    RealVector p(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto& x = (*it)[static_cast<std::size_t>(i)];
      if (!x.is_number()) fail("initial[" + std::to_string(i) + "]", "expected a number");
      p[i] = x.get<double>();
    }
    auto report = ProbVector::check(p);
    if (!report.ok()) {
      ValidationReport r;
      r.merge(report, "initial");
      throw ValidationError(std::move(r));
    }
    m.prior = ProbVector(std::move(p));
  }
  if (auto r = validate_hmm(m); !r.ok()) throw ValidationError(std::move(r));
  return m;
}

inline HqmmModel read_hqmm(const json& doc) {
  HqmmModel m;
  m.alphabet = read_alphabet(doc);
  m.dim = read_dimension(doc, "dimension");
  m.operations.resize(m.alphabet.size());
  for_each_symbol(require(doc, "kraus", ""), "kraus", m.alphabet,
                  [&](std::size_t s, const json& v, const std::string& path) {
                    if (!v.is_array() || v.empty()) fail(path, "expected a non-empty list of Kraus matrices");
                    for (std::size_t i = 0; i < v.size(); ++i) {
                      m.operations[s].push_back(read_matrix(v[i], path + "[" + std::to_string(i) + "]", m.dim, m.dim));
                    }
                  });
  m.initial = read_density(doc, m.dim);
  if (auto r = validate_hqmm(m); !r.ok()) throw ValidationError(std::move(r));
  return m;
}

inline HqmmModel read_vn(const json& doc) {
  Alphabet alphabet = read_alphabet(doc);
  const Eigen::Index d = read_dimension(doc, "dimension");
  std::vector<ComplexMatrix> projectors(alphabet.size());
  for_each_symbol(require(doc, "projectors", ""), "projectors", alphabet,
                  [&](std::size_t s, const json& v, const std::string& path) {
                    projectors[s] = read_matrix(v, path, d, d);
                  });
  ComplexMatrix u = read_matrix(require(doc, "unitary", ""), "unitary", d, d);
  HqmmModel m;
  try {
    m = vn_generator(projectors, u, std::move(alphabet));
  } catch (const std::invalid_argument& e) {
    ValidationReport r;
    r.add("vn", e.what());
    throw ValidationError(std::move(r));
  }
  m.initial = read_density(doc, d);
  return m;
}

inline MpsModel read_mps(const json& doc) {
  MpsModel m;
  m.alphabet = read_alphabet(doc);
  m.bond_dim = read_dimension(doc, "dimension");
  m.phys_dim = read_dimension(doc, "physical_dimension");
  const json& tensors = require(doc, "tensors", "");
  if (!tensors.is_array() || static_cast<Eigen::Index>(tensors.size()) != m.phys_dim) {
    fail("tensors", "expected " + std::to_string(m.phys_dim) + " matrices");
  }
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    m.tensors.push_back(read_matrix(tensors[i], "tensors[" + std::to_string(i) + "]", m.bond_dim, m.bond_dim));
  }
  m.projectors.resize(m.alphabet.size());
  for_each_symbol(require(doc, "projectors", ""), "projectors", m.alphabet,
                  [&](std::size_t s, const json& v, const std::string& path) {
                    m.projectors[s] = read_matrix(v, path, m.phys_dim, m.phys_dim);
                  });
  auto init = read_density(doc, m.bond_dim);
  m.initial = init ? *init : DensityMatrix::maximally_mixed(m.bond_dim);
  if (auto r = validate_mps(m); !r.ok()) throw ValidationError(std::move(r));
  return m;
}

inline std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline json write_entry(const complex& z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

inline json write_matrix(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(write_entry(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json write_alphabet(const Alphabet& a) { return json(a.symbols()); }

}  // namespace detail

/// Parse and validate one model document. Syntax errors carry the line and
/// column; structural errors name the offending field. Validation failures
/// are thrown as ValidationError with the module's diagnostics.
inline ModelFile parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("syntax error at " + detail::line_column(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("model document must be a JSON object");
  const json& kind_field = detail::require(doc, "kind", "");
  if (!kind_field.is_string()) detail::fail("kind", "expected a string");
  ModelFile file;
  file.kind = kind_field.get<std::string>();
  if (auto it = doc.find("name"); it != doc.end() && it->is_string()) file.name = it->get<std::string>();
  if (auto it = doc.find("source"); it != doc.end() && it->is_string()) file.source = it->get<std::string>();
  if (file.kind == "hmm") {
    file.model = detail::read_hmm(doc);
  } else if (file.kind == "hqmm") {
    file.model = detail::read_hqmm(doc);
  } else if (file.kind == "vn") {
    file.model = detail::read_vn(doc);
  } else if (file.kind == "mps") {
    file.model = detail::read_mps(doc);
  } else {
    detail::fail("kind", "unknown model kind '" + file.kind + "' (expected hmm, hqmm, vn or mps)");
  }
  return file;
}

inline ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

inline json to_json(const HmmModel& m) {
  json doc{{"kind", "hmm"}, {"alphabet", detail::write_alphabet(m.alphabet)}, {"dimension", m.states()}};
  json t = json::object();
  for (std::size_t s = 0; s < m.alphabet.size(); ++s) {
    t[m.alphabet[s]] = detail::write_matrix(m.transitions[s].cast<complex>());
  }
  doc["transitions"] = std::move(t);
  if (m.prior) doc["initial"] = std::vector<double>(m.prior->vector().begin(), m.prior->vector().end());
  return doc;
}

inline json to_json(const HqmmModel& m) {
  json doc{{"kind", "hqmm"}, {"alphabet", detail::write_alphabet(m.alphabet)}, {"dimension", m.dim}};
  json k = json::object();
  for (std::size_t s = 0; s < m.alphabet.size(); ++s) {
    json ops = json::array();
    for (const auto& op : m.operations[s]) ops.push_back(detail::write_matrix(op));
    k[m.alphabet[s]] = std::move(ops);
  }
  doc["kraus"] = std::move(k);
  if (m.initial) doc["initial"] = detail::write_matrix(m.initial->matrix());
  return doc;
}

inline json to_json(const MpsModel& m) {
  json doc{{"kind", "mps"},
           {"alphabet", detail::write_alphabet(m.alphabet)},
           {"dimension", m.bond_dim},
           {"physical_dimension", m.phys_dim}};
  json t = json::array();
  for (const auto& v : m.tensors) t.push_back(detail::write_matrix(v));
  doc["tensors"] = std::move(t);
  json p = json::object();
  for (std::size_t s = 0; s < m.alphabet.size(); ++s) p[m.alphabet[s]] = detail::write_matrix(m.projectors[s]);
  doc["projectors"] = std::move(p);
  doc["initial"] = detail::write_matrix(m.initial.matrix());
  return doc;
}

inline std::string serialize_model(const AnyModel& model, std::string_view name = {}, std::string_view source = {}) {
  json doc = std::visit([](const auto& m) { return to_json(m); }, model);
  if (!name.empty()) doc["name"] = name;
  if (!source.empty()) doc["source"] = source;
  return doc.dump(2) + "\n";
}

inline std::string serialize_model(const ModelFile& file) {
  return serialize_model(file.model, file.name, file.source);
}

}  // namespace hqmm::io
