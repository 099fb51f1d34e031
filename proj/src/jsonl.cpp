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

#include "parakit/jsonl.hpp"

#include <map>

#include "parakit/common.hpp"

namespace parakit {

JsonlWriter::JsonlWriter(const std::string& path, const std::string& schema)
    : out_(path), path_(path) {
  if (!out_) throw ConfigError("cannot write " + path);
  nlohmann::json header = {{"schema", schema}, {"version", kSchemaVersion}};
  out_ << header.dump() << "\n";
}

void JsonlWriter::write(const nlohmann::json& record) {
  out_ << record.dump() << "\n";
  if (!out_) throw DataError("write failed: " + path_);
}

void JsonlWriter::close() { out_.close(); }

JsonlFile read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  JsonlFile file;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": malformed JSON: " + e.what());
    }
    if (lineno == 1 && rec.is_object() && rec.contains("schema") &&
        !rec.contains("id") && !rec.contains("doc_id")) {
      file.schema = rec.at("schema").get<std::string>();
      if (rec.contains("version")) file.version = rec.at("version").get<int>();
      continue;
    }
    file.records.push_back(std::move(rec));
  }
  return file;
}

namespace {

const std::map<std::string, std::vector<std::string>>& schema_fields() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"parakit/corpus", {"id"}},
      {"parakit/stage1",
       {"doc_id", "prompt", "source", "target", "combination_id", "seed"}},
      {"parakit/candidates", {"doc_id", "prompt", "text"}},
      {"parakit/scored", {"doc_id", "prompt", "text", "scores"}},
      {"parakit/stage2", {"input", "prompt", "target", "scores"}},
      {"parakit/rejections", {"doc_id", "reason"}},
  };
  return table;
}

void check_record(const std::string& path, int index,
                  const std::string& schema, const nlohmann::json& rec) {
  if (!rec.is_object()) {
    throw DataError(path + ": record " + std::to_string(index) +
                    " is not an object");
  }
  for (const std::string& field : schema_fields().at(schema)) {
    if (!rec.contains(field)) {
      throw DataError(path + ": record " + std::to_string(index) +
                      " missing field '" + field + "' required by " + schema);
    }
  }
  if (schema == "parakit/corpus" && !rec.contains("text") &&
      !rec.contains("tokens")) {
    throw DataError(path + ": record " + std::to_string(index) +
                    " needs 'text' or 'tokens'");
  }
  if (schema == "parakit/stage1") {
    std::string prompt = rec.at("prompt").get<std::string>();
    std::string source = rec.at("source").get<std::string>();
    if (!starts_with(source, prompt)) {
      throw DataError(path + ": record " + std::to_string(index) +
                      ": source does not begin with its prompt");
    }
  }
  if ((schema == "parakit/scored" || schema == "parakit/stage2")) {
    const nlohmann::json& s = rec.at("scores");
    for (const char* f : {"sigma", "bleu_div", "wpd", "delta", "nu", "pqi"}) {
      if (!s.contains(f)) {
        throw DataError(path + ": record " + std::to_string(index) +
                        " scores missing '" + std::string(f) + "'");
      }
    }
  }
}

}  // namespace

void schema_check(const std::string& path) {
  JsonlFile file = read_jsonl(path);
  std::string schema = file.schema.empty() ? "parakit/corpus" : file.schema;
  if (!schema_fields().count(schema)) {
    throw DataError(path + ": unknown schema '" + schema + "'");
  }
  if (!file.schema.empty() && file.version != kSchemaVersion) {
    throw DataError(path + ": unsupported schema version " +
                    std::to_string(file.version));
  }
  for (size_t i = 0; i < file.records.size(); ++i) {
    check_record(path, static_cast<int>(i + 1), schema, file.records[i]);
  }
}

}  // namespace parakit
