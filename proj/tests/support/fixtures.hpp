// Copyright 2026 The dsteval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DSTEVAL_TESTS_FIXTURES_HPP_
#define DSTEVAL_TESTS_FIXTURES_HPP_

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "dsteval/core.hpp"
#include "dsteval/ingest.hpp"

#ifndef DSTEVAL_FIXTURE_DIR
#error "DSTEVAL_FIXTURE_DIR must point at tests/fixtures"
#endif
#ifndef DSTEVAL_DATA_DIR
#error "DSTEVAL_DATA_DIR must point at data/"
#endif

namespace dsteval::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(DSTEVAL_FIXTURE_DIR) + "/" + name;
}

inline std::string default_schema_path() {
  return std::string(DSTEVAL_DATA_DIR) + "/schemas/multiwoz21.json";
}

// The annotated dialogue traces load strictly; the extra-slot model pair
// uses slots outside the MultiWOZ ontology and needs strict = false.
inline std::vector<Dialogue> load_fixture(const std::string& name,
                                          bool strict = true) {
  return load_corpus(fixture_path(name), multiwoz21_schema(), {.strict = strict});
}

inline double round4(double v) { return std::round(v * 1e4) / 1e4; }

// Scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("dsteval-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace dsteval::testing

#endif  // DSTEVAL_TESTS_FIXTURES_HPP_
