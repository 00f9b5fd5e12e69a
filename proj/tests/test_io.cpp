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

#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "mvcf/io.hpp"
#include "test_helpers.hpp"

using namespace mvcf;
using namespace mvcf_test;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("mvcf_io_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static inline int counter = 0;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_CASE("dense csv round trip") {
  TempDir dir;
  write_file(dir.file("m.csv"), "1,2,3\n4,5,6\n");
  const Matrix M = load_dense_csv(dir.file("m.csv"));
  REQUIRE(M.rows() == 2);
  REQUIRE(M.cols() == 3);
  CHECK(M(1, 2) == 6.0);

  save_dense_csv(dir.file("m2.csv"), M);
  const Matrix M2 = load_dense_csv(dir.file("m2.csv"));
  CHECK((M - M2).cwiseAbs().maxCoeff() == 0.0);

  write_file(dir.file("ragged.csv"), "1,2\n3\n");
  CHECK_THROWS_AS(load_dense_csv(dir.file("ragged.csv")), ParseError);
  write_file(dir.file("junk.csv"), "1,x\n");
  CHECK_THROWS_AS(load_dense_csv(dir.file("junk.csv")), ParseError);
}

TEST_CASE("matrix market parse, comments and errors") {
  TempDir dir;
  write_file(dir.file("a.mtx"),
             "%%MatrixMarket matrix coordinate real general\n"
             "% produced by hand\n"
             "3 2 3\n"
             "1 1 0.5\n"
             "3 1 -2\n"
             "2 2 7\n");
  const Matrix M = load_matrix_market(dir.file("a.mtx"));
  REQUIRE(M.rows() == 3);
  REQUIRE(M.cols() == 2);
  CHECK(M(0, 0) == 0.5);
  CHECK(M(2, 0) == -2.0);
  CHECK(M(1, 1) == 7.0);
  CHECK(M(0, 1) == 0.0);

  write_file(dir.file("bad_banner.mtx"), "%%MatrixMarket matrix array real general\n1 1\n1\n");
  CHECK_THROWS_AS(load_matrix_market(dir.file("bad_banner.mtx")), ParseError);

  write_file(dir.file("oob.mtx"),
             "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n");
  CHECK_THROWS_AS(load_matrix_market(dir.file("oob.mtx")), ParseError);

  write_file(dir.file("count.mtx"),
             "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n");
  CHECK_THROWS_AS(load_matrix_market(dir.file("count.mtx")), ParseError);

  CHECK_THROWS_AS(load_matrix_market(dir.file("missing.mtx")), ParseError);
}

TEST_CASE("matrix market round trip preserves values exactly") {
  TempDir dir;
  Rng rng(1);
  Matrix M = random_nonneg(5, 4, rng);
  M(2, 2) = 0.0;  // keep a structural zero
  save_matrix_market(dir.file("m.mtx"), M);
  const Matrix M2 = load_matrix_market(dir.file("m.mtx"));
  CHECK((M - M2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("labels csv parses and validates") {
  TempDir dir;
  write_file(dir.file("labels.csv"), "0,1\n1,0\n2,1\n");
  const auto labels = load_labels_csv(dir.file("labels.csv"), 3, 2);
  CHECK(labels == std::vector<int>{1, 0, 1});

  write_file(dir.file("range.csv"), "0,7\n1,0\n2,1\n");
  CHECK_THROWS_AS(load_labels_csv(dir.file("range.csv"), 3, 5), ParseError);

  write_file(dir.file("dup.csv"), "0,1\n0,0\n2,1\n");
  CHECK_THROWS_AS(load_labels_csv(dir.file("dup.csv"), 3, 2), ParseError);

  write_file(dir.file("gap.csv"), "0,1\n2,1\n");
  CHECK_THROWS_AS(load_labels_csv(dir.file("gap.csv"), 3, 2), ParseError);
}

TEST_CASE("mask csv round trip") {
  TempDir dir;
  const std::vector<std::uint8_t> mask = {1, 0, 0, 1, 1};
  save_mask_csv(dir.file("mask.csv"), mask);
  CHECK(load_mask_csv(dir.file("mask.csv")) == mask);

  write_file(dir.file("bad.csv"), "0\n2\n");
  CHECK_THROWS_AS(load_mask_csv(dir.file("bad.csv")), ParseError);
}

TEST_CASE("manifest parsing and dataset loading") {
  TempDir dir;
  // samples_x_features csv: 2 file rows x 3 columns -> transposed to 3 x 2.
  write_file(dir.file("v1.csv"), "1,2,3\n4,5,6\n");
  write_file(dir.file("v2.csv"), "0,1,0\n1,0,1\n");
  write_file(dir.file("labels.csv"), "0,0\n1,1\n");
  write_file(dir.file("data.manifest"),
             "# toy dataset\n"
             "name = toy\n"
             "orientation = samples_x_features\n"
             "classes = 2\n"
             "labels = labels.csv\n"
             "view = v1.csv\n"
             "view = v2.csv\n");

  const DatasetManifest manifest = load_manifest(dir.file("data.manifest"));
  CHECK(manifest.name == "toy");
  CHECK(manifest.view_paths.size() == 2);
  CHECK(manifest.declared_classes == 2);

  const MultiViewDataset ds = load_dataset(manifest);
  CHECK(ds.n_views() == 2);
  CHECK(ds.n_samples() == 2);
  REQUIRE(ds.views[0].rows() == 3);  // transposed per orientation
  CHECK(ds.views[0](2, 1) == 6.0);
  CHECK(ds.labels == std::vector<int>{0, 1});

  write_file(dir.file("bad.manifest"), "name = x\nwhatever = 1\n");
  CHECK_THROWS_AS(load_manifest(dir.file("bad.manifest")), ParseError);
  CHECK_THROWS_AS(load_manifest(dir.file("nope.manifest")), ParseError);
}

TEST_CASE("mismatched views are rejected at load time") {
  TempDir dir;
  write_file(dir.file("v1.csv"), "1,2,3\n4,5,6\n");  // 3 samples
  write_file(dir.file("v2.csv"), "1,2\n3,4\n");      // 2 samples
  write_file(dir.file("labels.csv"), "0,0\n1,1\n2,0\n");
  write_file(dir.file("m.manifest"),
             "name = bad\nlabels = labels.csv\nview = v1.csv\nview = v2.csv\n");
  const DatasetManifest manifest = load_manifest(dir.file("m.manifest"));
  CHECK_THROWS_AS(load_dataset(manifest), MismatchedSampleCount);
}

TEST_CASE("trace csv layout") {
  TempDir dir;
  Vector f(2), alpha(2);
  f << 1.0, 2.0;
  alpha << 0.5, 0.5;
  save_trace_csv(dir.file("trace.csv"), {10.0, 9.0}, {f, f}, {alpha, alpha});
  std::ifstream in(dir.file("trace.csv"));
  std::string header, row0;
  std::getline(in, header);
  std::getline(in, row0);
  CHECK(header == "iter,total,f_1,f_2,alpha_1,alpha_2");
  CHECK(row0 == "0,10,1,2,0.5,0.5");
}
