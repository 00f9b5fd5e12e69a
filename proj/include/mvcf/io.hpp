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

#ifndef MVCF_IO_HPP
#define MVCF_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mvcf/core.hpp"

namespace mvcf {

enum class ViewFormat { auto_detect, matrixmarket, dense_csv };
enum class Orientation { features_x_samples, samples_x_features };

/// Description of an on-disk multi-view dataset. Paths are resolved relative
/// to the manifest file's directory.
struct DatasetManifest {
  std::string name;
  std::vector<std::string> view_paths;
  std::string labels_path;
  ViewFormat format = ViewFormat::auto_detect;
  Orientation orientation = Orientation::features_x_samples;
  int declared_classes = 0;  // 0 = infer from the labels file
  std::string base_dir;
};

// --- matrices ---------------------------------------------------------------

/// Reads a MatrixMarket coordinate file (real or integer, general symmetry,
/// 1-based indices, '%' comments honored) into a dense matrix.
Matrix load_matrix_market(const std::string& path);

/// Writes the nonzero entries of M as a MatrixMarket coordinate file.
void save_matrix_market(const std::string& path, const Matrix& M);

/// Headerless comma-separated values; file rows become matrix rows.
Matrix load_dense_csv(const std::string& path);
void save_dense_csv(const std::string& path, const Matrix& M);

// --- labels and masks -------------------------------------------------------

/// Lines of "sample_index,class_id" covering every index in [0, n) exactly
/// once. Class ids must lie in [0, declared_classes) when that bound is set.
std::vector<int> load_labels_csv(const std::string& path, Index n,
                                 int declared_classes);
void save_labels_csv(const std::string& path, const std::vector<int>& labels);

/// One-column CSV of 0/1 flags, one row per sample.
std::vector<std::uint8_t> load_mask_csv(const std::string& path);
void save_mask_csv(const std::string& path, const std::vector<std::uint8_t>& mask);

// --- manifests and datasets -------------------------------------------------

/// Parses a key = value manifest ('#' comments, repeated `view` keys allowed).
DatasetManifest load_manifest(const std::string& path);
void save_manifest(const std::string& path, const DatasetManifest& m);

/// Reads one view file (format by extension when auto) and orients it to
/// features x samples.
Matrix load_view(const std::string& path, ViewFormat format,
                 Orientation orientation);

/// Loads every view, orients them to features x samples, reads labels and
/// validates the assembled dataset.
MultiViewDataset load_dataset(const DatasetManifest& manifest);

// --- run artifacts ----------------------------------------------------------

/// CSV with columns iter,total,f_1..f_nv,alpha_1..alpha_nv.
void save_trace_csv(const std::string& path,
                    const std::vector<double>& objective_trace,
                    const std::vector<Vector>& f_trace,
                    const std::vector<Vector>& alpha_trace);

/// Shortest-exact formatting used by every CSV writer.
std::string format_double(double x);

}  // namespace mvcf

#endif  // MVCF_IO_HPP
