// Copyright 2026 The Parakit Authors.
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

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace parakit {

// Line-delimited JSON with a versioned schema header as the first line:
//   {"schema": "parakit/<name>", "version": 1}

inline constexpr int kSchemaVersion = 1;

class JsonlWriter {
 public:
  JsonlWriter(const std::string& path, const std::string& schema);
  void write(const nlohmann::json& record);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
};

struct JsonlFile {
  std::string schema;  // empty when the file carries no header
  int version = 0;
  std::vector<nlohmann::json> records;
};

JsonlFile read_jsonl(const std::string& path);

// Validates the header and per-record required fields of any known schema.
// Throws DataError with a line number on the first violation.
void schema_check(const std::string& path);

}  // namespace parakit
