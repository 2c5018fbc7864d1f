// Copyright 2026 The Phonaudit Authors.
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

// JSON over HTTP for the annotation service.
//
//   POST /campaign                   {session_id, annotator_id,
//                                     tasks: [...] | tasks_path: "..."}
//   GET  /session/{id}/next          task at the cursor
//   GET  /session/{id}/task/{index}  back/forward navigation
//   POST /session/{id}/submit        one PreferenceRecord
//   GET  /session/{id}/progress
//   GET  /session/{id}/records       records JSONL
//   GET  /audio/{utterance_id}       honors Range
//
// Errors come back as {"error": "<code>", "message": "..."}.

#ifndef PHONAUDIT_HTTP_FRONTEND_H_
#define PHONAUDIT_HTTP_FRONTEND_H_

#include <memory>
#include <string>

#include "json.hpp"
#include "phonaudit/annotation_service.h"
#include "phonaudit/errors.h"

namespace httplib {
class Server;
}

namespace phonaudit {

int HttpStatusFor(ErrorCode code);

nlohmann::json ToJson(const TaskView& view);
nlohmann::json ToJson(const SubmitAck& ack);
nlohmann::json ToJson(const Progress& progress);

class HttpFrontend {
 public:
  explicit HttpFrontend(AnnotationService& service);
  ~HttpFrontend();

  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  // Returns the bound port, or -1.
  int BindToAnyPort(const std::string& host);
  bool Bind(const std::string& host, int port);
  // Blocks until Stop().
  bool ListenAfterBind();
  void Stop();
  void WaitUntilReady() const;

 private:
  void Register();

  AnnotationService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace phonaudit

#endif  // PHONAUDIT_HTTP_FRONTEND_H_
