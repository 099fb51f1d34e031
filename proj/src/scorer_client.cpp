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

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>
#include <mutex>

#include "parakit/common.hpp"
#include "parakit/scorers.hpp"

#include "httplib.h"

namespace parakit {

namespace {

// Bidirectional pipe to a spawned scorer process speaking JSON lines.
class SubprocessPipe {
 public:
  explicit SubprocessPipe(const std::string& command) {
    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0) {
      throw ScorerError("failed to create scorer pipes", 0, false);
    }
    pid_ = fork();
    if (pid_ < 0) throw ScorerError("failed to fork scorer process", 0, false);
    if (pid_ == 0) {
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    in_fd_ = from_child[0];
    out_fd_ = to_child[1];
  }

  ~SubprocessPipe() {
    if (out_fd_ >= 0) close(out_fd_);
    if (in_fd_ >= 0) close(in_fd_);
    if (pid_ > 0) {
      int status = 0;
      waitpid(pid_, &status, 0);
    }
  }

  std::string round_trip(const std::string& line) {
    std::string payload = line + "\n";
    size_t written = 0;
    while (written < payload.size()) {
      ssize_t n = write(out_fd_, payload.data() + written,
                        payload.size() - written);
      if (n <= 0) throw ScorerError("scorer pipe write failed", 0, true);
      written += static_cast<size_t>(n);
    }
    std::string response;
    char buf[4096];
    while (true) {
      ssize_t n = read(in_fd_, buf, sizeof(buf));
      if (n <= 0) throw ScorerError("scorer pipe closed", 0, true);
      response.append(buf, static_cast<size_t>(n));
      if (response.find('\n') != std::string::npos) break;
    }
    return response.substr(0, response.find('\n'));
  }

 private:
  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
};

}  // namespace

struct ScorerClient::Impl {
  std::string url;      // HTTP transport when non-empty
  std::string command;  // subprocess transport when non-empty
  int max_attempts = 3;
  int timeout_seconds = 10;
  std::unique_ptr<SubprocessPipe> pipe;
  std::mutex mutex;  // the pipe is a single shared channel
};

ScorerClient::ScorerClient(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
ScorerClient::~ScorerClient() = default;

std::unique_ptr<ScorerClient> ScorerClient::http(const std::string& url,
                                                 int max_attempts,
                                                 int timeout_seconds) {
  auto impl = std::make_unique<Impl>();
  impl->url = url;
  impl->max_attempts = max_attempts;
  impl->timeout_seconds = timeout_seconds;
  return std::unique_ptr<ScorerClient>(new ScorerClient(std::move(impl)));
}

std::unique_ptr<ScorerClient> ScorerClient::subprocess(
    const std::string& command, int max_attempts) {
  auto impl = std::make_unique<Impl>();
  impl->command = command;
  impl->max_attempts = max_attempts;
  impl->pipe = std::make_unique<SubprocessPipe>(command);
  return std::unique_ptr<ScorerClient>(new ScorerClient(std::move(impl)));
}

nlohmann::json ScorerClient::round_trip(const nlohmann::json& request) {
  std::string last_error;
  for (int attempt = 1; attempt <= impl_->max_attempts; ++attempt) {
    try {
      std::string body;
      if (!impl_->url.empty()) {
        // Split scheme://host:port/path.
        std::string url = impl_->url;
        std::string path = "/";
        size_t scheme = url.find("://");
        size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
        size_t slash = url.find('/', host_start);
        if (slash != std::string::npos) {
          path = url.substr(slash);
          url = url.substr(0, slash);
        }
        httplib::Client client(url);
        client.set_read_timeout(impl_->timeout_seconds, 0);
        client.set_write_timeout(impl_->timeout_seconds, 0);
        auto res = client.Post(path, request.dump(), "application/json");
        if (!res) {
          throw ScorerError("scorer request failed: " +
                                httplib::to_string(res.error()),
                            attempt, true);
        }
        if (res->status != 200) {
          throw ScorerError("scorer returned HTTP " +
                                std::to_string(res->status),
                            attempt, res->status >= 500);
        }
        body = res->body;
      } else {
        std::lock_guard<std::mutex> lock(impl_->mutex);
        if (!impl_->pipe) {
          impl_->pipe = std::make_unique<SubprocessPipe>(impl_->command);
        }
        try {
          body = impl_->pipe->round_trip(request.dump());
        } catch (const ScorerError&) {
          impl_->pipe.reset();  // respawn on the next attempt
          throw;
        }
      }
      nlohmann::json response = nlohmann::json::parse(body);
      if (!response.contains("scores") || !response["scores"].is_array()) {
        throw ScorerError("scorer response missing 'scores' array", attempt,
                          false);
      }
      return response;
    } catch (const ScorerError& e) {
      last_error = e.what();
      if (!e.retryable) throw ScorerError(last_error, attempt, false);
    } catch (const nlohmann::json::exception& e) {
      last_error = std::string("scorer response is not JSON: ") + e.what();
    }
  }
  throw ScorerError(last_error, impl_->max_attempts, true);
}

std::vector<double> ScorerClient::similarity_batch(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  nlohmann::json request;
  request["op"] = "similarity";
  nlohmann::json items = nlohmann::json::array();
  for (const auto& [a, b] : pairs) items.push_back({{"a", a}, {"b", b}});
  request["items"] = std::move(items);
  nlohmann::json response = round_trip(request);
  auto scores = response["scores"].get<std::vector<double>>();
  if (scores.size() != pairs.size()) {
    throw ScorerError("scorer returned " + std::to_string(scores.size()) +
                          " scores for " + std::to_string(pairs.size()) +
                          " items",
                      impl_->max_attempts, false);
  }
  return scores;
}

std::vector<double> ScorerClient::fluency_batch(
    const std::vector<std::string>& texts) {
  nlohmann::json request;
  request["op"] = "fluency";
  request["items"] = texts;
  nlohmann::json response = round_trip(request);
  auto scores = response["scores"].get<std::vector<double>>();
  if (scores.size() != texts.size()) {
    throw ScorerError("scorer returned wrong score count",
                      impl_->max_attempts, false);
  }
  return scores;
}

double ScorerClient::raw(const std::string& a, const std::string& b) {
  return similarity_batch({{a, b}})[0];
}

}  // namespace parakit
