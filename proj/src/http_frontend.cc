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

#include "phonaudit/http_frontend.h"

#include <exception>

#include "httplib.h"
#include "phonaudit/audit_pipeline.h"
#include "phonaudit/corpus_io.h"

namespace phonaudit {

using nlohmann::json;

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kUnknownTask:
      return 404;
    case ErrorCode::kStaleSession:
    case ErrorCode::kSessionComplete:
    case ErrorCode::kDuplicateRecord:
      return 409;
    case ErrorCode::kDomainError:
      return 416;
    case ErrorCode::kIoError:
      return 500;
    default:
      return 400;
  }
}

json ToJson(const TaskView& view) {
  json j = {{"task", ToJson(view.task)},
            {"audio_url", "/audio/" + view.task.utterance_id},
            {"index", view.index},
            {"total", view.total},
            {"saved", nullptr}};
  if (view.saved) j["saved"] = ToJson(*view.saved);
  return j;
}

json ToJson(const SubmitAck& ack) {
  return {{"cursor", ack.cursor},
          {"total", ack.total},
          {"advanced", ack.advanced},
          {"stored", ack.stored}};
}

json ToJson(const Progress& p) {
  return {{"annotator_id", p.annotator_id},
          {"cursor", p.cursor},
          {"total", p.total},
          {"submitted", p.submitted},
          {"complete", p.cursor == p.total}};
}

namespace {

void SendJson(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, int status, std::string_view code,
               const std::string& message) {
  SendJson(res, {{"error", code}, {"message", message}}, status);
}

json ParseBody(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput,
                std::string("request body is not JSON: ") + e.what());
  }
}

}  // namespace

HttpFrontend::HttpFrontend(AnnotationService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  Register();
}

HttpFrontend::~HttpFrontend() { Stop(); }

void HttpFrontend::Register() {
  httplib::Server& s = *server_;

  s.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                             std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      SendError(res, HttpStatusFor(e.code()), ErrorCodeName(e.code()),
                e.what());
    } catch (const json::exception& e) {
      SendError(res, 400, ErrorCodeName(ErrorCode::kMalformedInput), e.what());
    } catch (const std::exception& e) {
      SendError(res, 500, "Internal", e.what());
    }
  });

  s.Post("/campaign", [this](const httplib::Request& req,
                             httplib::Response& res) {
    json body = ParseBody(req);
    if (!body.is_object()) {
      throw Error(ErrorCode::kMalformedInput, "campaign must be an object");
    }
    std::vector<BlindTask> tasks;
    if (auto it = body.find("tasks"); it != body.end()) {
      for (const json& t : *it) tasks.push_back(BlindTaskFromJson(t));
    } else if (auto path = body.find("tasks_path"); path != body.end()) {
      tasks = LoadTasks(path->get<std::string>());
    } else {
      throw Error(ErrorCode::kMalformedInput, "need tasks or tasks_path");
    }
    const std::string id = body.at("session_id").get<std::string>();
    service_.CreateSession(id, body.at("annotator_id").get<std::string>(),
                           std::move(tasks));
    SendJson(res, {{"session_id", id}, {"progress", ToJson(service_.GetProgress(id))}});
  });

  s.Get(R"(/session/([^/]+)/next)",
        [this](const httplib::Request& req, httplib::Response& res) {
          SendJson(res, ToJson(service_.GetNextTask(req.matches[1])));
        });

  s.Get(R"(/session/([^/]+)/task/(\d{1,9}))",
        [this](const httplib::Request& req, httplib::Response& res) {
          int index = std::stoi(req.matches[2]);
          SendJson(res, ToJson(service_.GetTask(req.matches[1], index)));
        });

  s.Post(R"(/session/([^/]+)/submit)",
         [this](const httplib::Request& req, httplib::Response& res) {
           const std::string id = req.matches[1];
           json body = ParseBody(req);
           if (body.is_object() && !body.contains("annotator_id")) {
             body["annotator_id"] = service_.GetProgress(id).annotator_id;
           }
           SendJson(res, ToJson(service_.Submit(id, RecordFromJson(body))));
         });

  s.Get(R"(/session/([^/]+)/progress)",
        [this](const httplib::Request& req, httplib::Response& res) {
          SendJson(res, ToJson(service_.GetProgress(req.matches[1])));
        });

  s.Get(R"(/session/([^/]+)/records)",
        [this](const httplib::Request& req, httplib::Response& res) {
          auto records = service_.Records(req.matches[1]);
          res.set_content(RecordsJsonl(records), "application/x-ndjson");
        });

  s.Get(R"(/audio/([^/]+))", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    const std::string utterance = req.matches[1];
    AudioSlice info = service_.AudioInfo(utterance);
    res.set_header("Accept-Ranges", "bytes");
    if (info.total_size == 0) {
      res.set_content("", info.content_type);
      return;
    }
    // httplib resolves the Range header against the length given here and
    // asks the provider for exactly the bytes it needs.
    res.set_content_provider(
        info.total_size, info.content_type,
        [this, utterance](size_t offset, size_t length, httplib::DataSink& sink) {
          AudioSlice slice = service_.ReadAudio(
              utterance, ByteRange{offset, offset + length - 1});
          return sink.write(slice.bytes.data(), slice.bytes.size());
        });
  });
}

int HttpFrontend::BindToAnyPort(const std::string& host) {
  return server_->bind_to_any_port(host);
}

bool HttpFrontend::Bind(const std::string& host, int port) {
  return server_->bind_to_port(host, port);
}

bool HttpFrontend::ListenAfterBind() { return server_->listen_after_bind(); }

void HttpFrontend::Stop() {
  if (server_ && server_->is_running()) server_->stop();
}

void HttpFrontend::WaitUntilReady() const { server_->wait_until_ready(); }

}  // namespace phonaudit
