/*
 * Copyright 2026 the mvcf authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mvcf/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mvcf {

namespace fs = std::filesystem;

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return in;
}

std::ofstream create_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, 0, "cannot create file");
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double parse_number(const std::string& token, const std::string& path, long line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(token, &pos);
    if (pos != trim(token).size() && pos != token.size()) {
      throw ParseError(path, line, "trailing characters after number: '" + token + "'");
    }
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(path, line, "not a number: '" + token + "'");
  }
}

long parse_integer(const std::string& token, const std::string& path, long line) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(token, &pos);
    if (pos != trim(token).size() && pos != token.size()) {
      throw ParseError(path, line, "trailing characters after integer: '" + token + "'");
    }
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(path, line, "not an integer: '" + token + "'");
  }
}

ViewFormat detect_format(const std::string& path) {
  std::string ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".mtx" || ext == ".mm") return ViewFormat::matrixmarket;
  if (ext == ".csv") return ViewFormat::dense_csv;
  throw ParseError(path, 0, "cannot infer view format from extension '" + ext + "'");
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Matrix load_matrix_market(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) throw ParseError(path, 1, "empty file");
  ++lineno;
  {
    std::istringstream banner(line);
    std::string tag, object, fmt, field, symmetry;
    banner >> tag >> object >> fmt >> field >> symmetry;
    if (tag != "%%MatrixMarket" || object != "matrix" || fmt != "coordinate" ||
        (field != "real" && field != "integer") || symmetry != "general") {
      throw ParseError(path, lineno,
                       "expected '%%MatrixMarket matrix coordinate real general'");
    }
  }

  // Skip comments, read the size line.
  Index rows = 0, cols = 0;
  long nnz = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    std::istringstream ss(t);
    if (!(ss >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) {
      throw ParseError(path, lineno, "malformed size line");
    }
    break;
  }

  Matrix M = Matrix::Zero(rows, cols);
  long seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    std::istringstream ss(t);
    long i = 0, j = 0;
    double v = 0.0;
    if (!(ss >> i >> j >> v)) throw ParseError(path, lineno, "malformed entry");
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw ParseError(path, lineno, "coordinate out of range");
    }
    M(i - 1, j - 1) = v;
    ++seen;
  }
  if (seen != nnz) {
    throw ParseError(path, lineno,
                     "entry count " + std::to_string(seen) + " does not match header " +
                         std::to_string(nnz));
  }
  return M;
}

void save_matrix_market(const std::string& path, const Matrix& M) {
  std::ofstream out = create_or_throw(path);
  long nnz = 0;
  for (Index j = 0; j < M.cols(); ++j) {
    for (Index i = 0; i < M.rows(); ++i) {
      if (M(i, j) != 0.0) ++nnz;
    }
  }
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << M.rows() << " " << M.cols() << " " << nnz << "\n";
  for (Index j = 0; j < M.cols(); ++j) {
    for (Index i = 0; i < M.rows(); ++i) {
      if (M(i, j) != 0.0) {
        out << (i + 1) << " " << (j + 1) << " " << format_double(M(i, j)) << "\n";
      }
    }
  }
}

Matrix load_dense_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<double> row;
    for (const std::string& tok : split(t, ',')) {
      row.push_back(parse_number(trim(tok), path, lineno));
    }
    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      throw ParseError(path, lineno, "ragged row: expected " + std::to_string(width) +
                                         " values, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path, lineno, "empty matrix");
  Matrix M(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      M(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return M;
}

void save_dense_csv(const std::string& path, const Matrix& M) {
  std::ofstream out = create_or_throw(path);
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      if (j) out << ",";
      out << format_double(M(i, j));
    }
    out << "\n";
  }
}

std::vector<int> load_labels_csv(const std::string& path, Index n,
                                 int declared_classes) {
  std::ifstream in = open_or_throw(path);
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto parts = split(t, ',');
    if (parts.size() != 2) throw ParseError(path, lineno, "expected 'index,class'");
    const long idx = parse_integer(trim(parts[0]), path, lineno);
    const long cls = parse_integer(trim(parts[1]), path, lineno);
    if (idx < 0 || idx >= n) throw ParseError(path, lineno, "sample index out of range");
    if (labels[static_cast<std::size_t>(idx)] != -1) {
      throw ParseError(path, lineno, "duplicate sample index " + std::to_string(idx));
    }
    if (cls < 0 || (declared_classes > 0 && cls >= declared_classes)) {
      throw ParseError(path, lineno,
                       "class id " + std::to_string(cls) + " outside [0, " +
                           std::to_string(declared_classes) + ")");
    }
    labels[static_cast<std::size_t>(idx)] = static_cast<int>(cls);
  }
  for (Index i = 0; i < n; ++i) {
    if (labels[static_cast<std::size_t>(i)] == -1) {
      throw ParseError(path, lineno, "sample " + std::to_string(i) + " has no label");
    }
  }
  return labels;
}

void save_labels_csv(const std::string& path, const std::vector<int>& labels) {
  std::ofstream out = create_or_throw(path);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << i << "," << labels[i] << "\n";
  }
}

std::vector<std::uint8_t> load_mask_csv(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<std::uint8_t> mask;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const long v = parse_integer(t, path, lineno);
    if (v != 0 && v != 1) throw ParseError(path, lineno, "mask value must be 0 or 1");
    mask.push_back(static_cast<std::uint8_t>(v));
  }
  return mask;
}

void save_mask_csv(const std::string& path, const std::vector<std::uint8_t>& mask) {
  std::ofstream out = create_or_throw(path);
  for (auto m : mask) out << static_cast<int>(m) << "\n";
}

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  DatasetManifest m;
  m.base_dir = fs::path(path).parent_path().string();

  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    const auto hash = t.find('#');
    if (hash != std::string::npos) t = trim(t.substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(path, lineno, "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));

    if (key == "name") {
      m.name = value;
    } else if (key == "view") {
      m.view_paths.push_back(value);
    } else if (key == "labels") {
      m.labels_path = value;
    } else if (key == "classes") {
      m.declared_classes = static_cast<int>(parse_integer(value, path, lineno));
    } else if (key == "orientation") {
      if (value == "features_x_samples") {
        m.orientation = Orientation::features_x_samples;
      } else if (value == "samples_x_features") {
        m.orientation = Orientation::samples_x_features;
      } else {
        throw ParseError(path, lineno, "unknown orientation '" + value + "'");
      }
    } else if (key == "format") {
      if (value == "auto") {
        m.format = ViewFormat::auto_detect;
      } else if (value == "matrixmarket") {
        m.format = ViewFormat::matrixmarket;
      } else if (value == "dense_csv") {
        m.format = ViewFormat::dense_csv;
      } else {
        throw ParseError(path, lineno, "unknown format '" + value + "'");
      }
    } else {
      throw ParseError(path, lineno, "unknown manifest key '" + key + "'");
    }
  }
  if (m.view_paths.empty()) throw ParseError(path, lineno, "manifest declares no views");
  if (m.labels_path.empty()) throw ParseError(path, lineno, "manifest declares no labels file");
  return m;
}

void save_manifest(const std::string& path, const DatasetManifest& m) {
  std::ofstream out = create_or_throw(path);
  out << "name = " << m.name << "\n";
  out << "orientation = "
      << (m.orientation == Orientation::features_x_samples ? "features_x_samples"
                                                           : "samples_x_features")
      << "\n";
  if (m.declared_classes > 0) out << "classes = " << m.declared_classes << "\n";
  out << "labels = " << m.labels_path << "\n";
  for (const auto& v : m.view_paths) out << "view = " << v << "\n";
}

Matrix load_view(const std::string& path, ViewFormat format,
                 Orientation orientation) {
  const ViewFormat fmt =
      format == ViewFormat::auto_detect ? detect_format(path) : format;
  Matrix X = fmt == ViewFormat::matrixmarket ? load_matrix_market(path)
                                             : load_dense_csv(path);
  if (orientation == Orientation::samples_x_features) X.transposeInPlace();
  return X;
}

MultiViewDataset load_dataset(const DatasetManifest& manifest) {
  const auto resolve = [&manifest](const std::string& p) {
    fs::path fp(p);
    if (fp.is_absolute() || manifest.base_dir.empty()) return p;
    return (fs::path(manifest.base_dir) / fp).string();
  };

  MultiViewDataset ds;
  for (const std::string& raw : manifest.view_paths) {
    ds.views.push_back(
        load_view(resolve(raw), manifest.format, manifest.orientation));
  }

  const Index n = ds.views.front().cols();
  for (std::size_t v = 1; v < ds.views.size(); ++v) {
    if (ds.views[v].cols() != n) {
      throw MismatchedSampleCount("view " + std::to_string(v) + " has " +
                                  std::to_string(ds.views[v].cols()) +
                                  " samples, expected " + std::to_string(n));
    }
  }

  ds.labels = load_labels_csv(resolve(manifest.labels_path), n, manifest.declared_classes);
  ds.n_classes = manifest.declared_classes;
  if (ds.n_classes == 0) {
    for (int c : ds.labels) ds.n_classes = std::max(ds.n_classes, c + 1);
  }
  require_valid(ds);
  return ds;
}

void save_trace_csv(const std::string& path,
                    const std::vector<double>& objective_trace,
                    const std::vector<Vector>& f_trace,
                    const std::vector<Vector>& alpha_trace) {
  if (objective_trace.size() != f_trace.size() ||
      objective_trace.size() != alpha_trace.size()) {
    throw LengthMismatch("trace vectors differ in length");
  }
  std::ofstream out = create_or_throw(path);
  const Index nv = f_trace.empty() ? 0 : f_trace.front().size();
  out << "iter,total";
  for (Index v = 0; v < nv; ++v) out << ",f_" << (v + 1);
  for (Index v = 0; v < nv; ++v) out << ",alpha_" << (v + 1);
  out << "\n";
  for (std::size_t t = 0; t < objective_trace.size(); ++t) {
    out << t << "," << format_double(objective_trace[t]);
    for (Index v = 0; v < nv; ++v) out << "," << format_double(f_trace[t](v));
    for (Index v = 0; v < nv; ++v) out << "," << format_double(alpha_trace[t](v));
    out << "\n";
  }
}

}  // namespace mvcf
