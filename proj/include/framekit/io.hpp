#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "framekit/bridging.hpp"
#include "framekit/dilation.hpp"
#include "framekit/duals.hpp"
#include "framekit/robustness.hpp"

namespace framekit {

// nlohmann::json keeps object keys sorted (std::map storage) and prints
// doubles with round-trip-exact shortest representations, which together
// give canonical, diffable output: identical payloads serialize to identical
// bytes.
using Json = nlohmann::json;

inline Json complex_to_json(const Complex& z, bool as_real) {
  if (as_real) return Json(z.real());
  return Json::array({z.real(), z.imag()});
}

inline Complex complex_from_json(const Json& j, const std::string& where) {
  double re = 0.0, im = 0.0;
  if (j.is_number()) {
    re = j.get<double>();
  } else if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    re = j[0].get<double>();
    im = j[1].get<double>();
  } else {
    throw Error(Errc::ParseError, where + ": expected a number or an [re,im] pair");
  }
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw Error(Errc::ParseError, where + ": non-finite entry");
  }
  return Complex(re, im);
}

inline Json matrix_to_json(const Matrix& m, bool as_real = false) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j), as_real));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json vector_to_json(const Vector& v, bool as_real = false) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i), as_real));
  return out;
}

// Frame files: {"dim": d, "field": "real"|"complex", "vectors": [...],
// "tol": {"rank_tol": ..., "eq_tol": ...}}. Vectors are listed row-by-row
// (one array per frame vector); complex entries are [re,im] pairs, real
// frames may use bare floats.

inline Json frame_to_json(const Frame& f) {
  const bool as_real = f.field() == ScalarField::Real;
  Json vectors = Json::array();
  for (Index i = 0; i < f.size(); ++i) {
    Json vec = Json::array();
    for (Index r = 0; r < f.dim(); ++r) {
      vec.push_back(complex_to_json(f.synthesis()(r, i), as_real));
    }
    vectors.push_back(std::move(vec));
  }
  return Json{{"dim", f.dim()},
              {"field", as_real ? "real" : "complex"},
              {"vectors", std::move(vectors)},
              {"tol", Json{{"rank_tol", f.tol().rank_tol}, {"eq_tol", f.tol().eq_tol}}}};
}

inline Frame frame_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::ParseError, "frame: expected a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) {
    throw Error(Errc::ParseError, "frame: missing integer field 'dim'");
  }
  const Index dim = j["dim"].get<Index>();
  if (dim < 1) throw Error(Errc::ParseError, "frame: dim must be >= 1");
  ScalarField field = ScalarField::Complex;
  if (j.contains("field")) {
    const std::string fs = j["field"].get<std::string>();
    if (fs == "real") {
      field = ScalarField::Real;
    } else if (fs != "complex") {
      throw Error(Errc::ParseError, "frame: field must be \"real\" or \"complex\"");
    }
  }
  ToleranceConfig tol;
  if (j.contains("tol")) {
    const Json& t = j["tol"];
    if (t.contains("rank_tol")) tol.rank_tol = t["rank_tol"].get<double>();
    if (t.contains("eq_tol")) tol.eq_tol = t["eq_tol"].get<double>();
    if (!(tol.rank_tol > 0.0) || !(tol.eq_tol > 0.0)) {
      throw Error(Errc::ParseError, "frame: tolerances must be positive");
    }
  }
  if (!j.contains("vectors") || !j["vectors"].is_array() || j["vectors"].empty()) {
    throw Error(Errc::ParseError, "frame: missing nonempty array 'vectors'");
  }
  const Json& vectors = j["vectors"];
  Matrix synthesis(dim, static_cast<Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const Json& vec = vectors[i];
    const std::string where = "vector " + std::to_string(i + 1);
    if (!vec.is_array() || static_cast<Index>(vec.size()) != dim) {
      throw Error(Errc::ParseError,
                  where + " has length " + std::to_string(vec.is_array() ? vec.size() : 0) +
                      ", expected dim " + std::to_string(dim));
    }
    for (Index r = 0; r < dim; ++r) {
      const Complex z = complex_from_json(vec[static_cast<std::size_t>(r)],
                                          where + " entry " + std::to_string(r + 1));
      if (field == ScalarField::Real && z.imag() != 0.0) {
        throw Error(Errc::ParseError, where + ": nonzero imaginary part in a real frame");
      }
      synthesis(r, static_cast<Index>(i)) = z;
    }
  }
  return Frame::validate(std::move(synthesis), tol, field);
}

inline Json dual_pair_to_json(const DualPair& pair) {
  return Json{{"primary", frame_to_json(pair.primary())}, {"dual", frame_to_json(pair.dual())}};
}

inline DualPair dual_pair_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("primary") || !j.contains("dual")) {
    throw Error(Errc::ParseError, "dual pair: expected {\"primary\": ..., \"dual\": ...}");
  }
  return DualPair::certify(frame_from_json(j["primary"]), frame_from_json(j["dual"]));
}

inline Json dilation_to_json(const Dilation& d) {
  return Json{{"big_dim", d.big_dim},
              {"onb", matrix_to_json(d.onb)},
              {"P", matrix_to_json(d.projection)},
              {"embedding", matrix_to_json(d.embedding)}};
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(Errc::IoError, "short write to " + path);
}

inline Json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::ParseError, path + ": invalid JSON");
  return j;
}

inline Frame parse_frame_file(const std::string& path) {
  return frame_from_json(parse_json_file(path));
}

inline DualPair parse_pair_file(const std::string& path) {
  const Json j = parse_json_file(path);
  // a bare frame file is promoted to (F, canonical dual)
  if (j.contains("vectors")) return canonical_dual(frame_from_json(j));
  return dual_pair_from_json(j);
}

/// FNV-1a 64-bit content hash, printed as fixed-width hex.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline std::string digest_files(const std::vector<std::string>& paths) {
  std::string all;
  for (const auto& p : paths) {
    all += p;
    all += '\0';
    all += read_text_file(p);
    all += '\0';
  }
  return fnv1a_hex(all);
}

struct RunConfig {
  std::uint64_t seed = 0;
  ToleranceConfig tol;
  std::uint64_t subset_budget = 100000;
  std::string output_path;
};

/// Deterministic command report: identical inputs and config produce
/// byte-identical `verdicts`; wall-clock timings live in a separate field so
/// they never perturb comparisons.
struct Report {
  std::string command;
  std::string inputs_digest;
  Json verdicts = Json::object();
  Json timings = Json::object();

  Json to_json() const {
    return Json{{"command", command},
                {"inputs_digest", inputs_digest},
                {"verdicts", verdicts},
                {"timings", timings}};
  }
};

inline void write_report(const Report& report, const std::string& path) {
  write_text_file(path, report.to_json().dump(2) + "\n");
}

// Coefficient/signal stream CSV: rows `signal_id, index, re, im` with
// 1-based indices; a missing row means that entry was erased. An optional
// header line is skipped. Three-column rows are read as real values.

struct CoefficientStream {
  std::map<Index, std::map<Index, Complex>> entries;  // signal_id -> index -> value
};

inline CoefficientStream parse_coefficient_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  CoefficientStream stream;
  std::istringstream lines(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    std::vector<std::string> cells;
    while (std::getline(fields, field, ',')) cells.push_back(field);
    if (cells.size() != 3 && cells.size() != 4) {
      throw Error(Errc::ParseError,
                  path + ":" + std::to_string(lineno) + ": expected 3 or 4 comma-separated fields");
    }
    try {
      const Index signal = static_cast<Index>(std::stoll(cells[0]));
      const Index index = static_cast<Index>(std::stoll(cells[1]));
      const double re = std::stod(cells[2]);
      const double im = cells.size() == 4 ? std::stod(cells[3]) : 0.0;
      if (!std::isfinite(re) || !std::isfinite(im)) {
        throw Error(Errc::ParseError, path + ":" + std::to_string(lineno) + ": non-finite value");
      }
      if (index < 1) {
        throw Error(Errc::ParseError, path + ":" + std::to_string(lineno) + ": index must be >= 1");
      }
      stream.entries[signal][index - 1] = Complex(re, im);
    } catch (const std::invalid_argument&) {
      if (lineno == 1) continue;  // header line
      throw Error(Errc::ParseError, path + ":" + std::to_string(lineno) + ": non-numeric field");
    } catch (const std::out_of_range&) {
      throw Error(Errc::ParseError, path + ":" + std::to_string(lineno) + ": value out of range");
    }
  }
  return stream;
}

/// Assembles dense vectors of length `dim` from a stream; every index must
/// be present.
inline std::vector<Vector> signals_from_stream(const CoefficientStream& stream, Index dim) {
  std::vector<Vector> signals;
  for (const auto& [id, entries] : stream.entries) {
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) {
      const auto it = entries.find(i);
      if (it == entries.end()) {
        throw Error(Errc::MissingCoefficient, "signal " + std::to_string(id) + " is missing entry " +
                                                  std::to_string(i + 1));
      }
      v(i) = it->second;
    }
    signals.push_back(std::move(v));
  }
  return signals;
}

/// Assembles received (possibly gappy) coefficient records of length `n`.
inline std::vector<std::pair<Index, ReceivedCoefficients>> received_from_stream(
    const CoefficientStream& stream, Index n) {
  std::vector<std::pair<Index, ReceivedCoefficients>> out;
  for (const auto& [id, entries] : stream.entries) {
    ReceivedCoefficients r;
    r.values.resize(static_cast<std::size_t>(n));
    for (const auto& [index, value] : entries) {
      if (index >= n) {
        throw Error(Errc::ParseError, "signal " + std::to_string(id) + " has index " +
                                          std::to_string(index + 1) + " beyond the frame size " +
                                          std::to_string(n));
      }
      r.values[static_cast<std::size_t>(index)] = value;
    }
    out.emplace_back(id, std::move(r));
  }
  return out;
}

}  // namespace framekit
