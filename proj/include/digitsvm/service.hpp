#pragma once

#include <memory>
#include <string>

#include "digitsvm/multiclass.hpp"

namespace digitsvm {

// Features for a 32x32 bitmap under the model's feature kind and scaling; the
// same path the training data went through.
FeatureVector bitmap_features(const OvrModel& model, const RawBitmap& bitmap);

struct HttpReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// HTTP front end over an immutable model.
//   POST /classify  {"rows": [32 strings of 32 '0'/'1']} -> {"label", "scores"}
//   GET  /healthz   model metadata
//   GET  /          files under ui_dir when it holds index.html, else a stub page
class ClassifyService {
 public:
  explicit ClassifyService(OvrModel model, std::string ui_dir = {});
  ~ClassifyService();
  ClassifyService(const ClassifyService&) = delete;
  ClassifyService& operator=(const ClassifyService&) = delete;

  HttpReply classify(const std::string& body) const;
  HttpReply health() const;
  HttpReply index() const;
  bool serves_ui_dir() const;

  // false when the port cannot be bound.
  bool bind(const std::string& host, int port);
  // Binds an ephemeral port and returns it, or -1.
  int bind_any_port(const std::string& host);
  // Blocks until stop().
  bool listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace digitsvm
