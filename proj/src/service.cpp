#include "digitsvm/service.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "digitsvm/errors.hpp"
#include "digitsvm/features.hpp"

namespace digitsvm {

namespace {

constexpr const char* kStubPage =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>digitsvm</title></head>\n"
    "<body><h1>digitsvm classify service</h1>\n"
    "<p>No UI bundle is installed. POST {\"rows\": [32 strings of 32 '0'/'1']} to /classify; "
    "model metadata is at /healthz.</p></body></html>\n";

HttpReply error_reply(int status, const std::string& message) {
  return {status, nlohmann::json{{"error", message}}.dump(), "application/json"};
}

}  // namespace

FeatureVector bitmap_features(const OvrModel& model, const RawBitmap& bitmap) {
  if (model.kind == FeatureKind::block64) {
    return scale_features(downsample(bitmap), model.scaling.divisor);
  }
  return moment_feature_vector(extract_moment_features(BinaryImage::from_bitmap(bitmap)),
                               model.scaling.log_compress);
}

struct ClassifyService::Impl {
  OvrModel model;
  std::string ui_dir;
  httplib::Server server;
};

ClassifyService::ClassifyService(OvrModel model, std::string ui_dir)
    : impl_(std::make_unique<Impl>()) {
  impl_->model = std::move(model);
  impl_->ui_dir = std::move(ui_dir);

  auto& srv = impl_->server;
  // No SO_REUSEPORT, so a second server on a taken port fails to bind.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  if (serves_ui_dir()) srv.set_mount_point("/", impl_->ui_dir);
  const auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
  };
  srv.Post("/classify", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, classify(req.body));
  });
  srv.Get("/healthz", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, health());
  });
  srv.Get("/", [this, send](const httplib::Request&, httplib::Response& res) { send(res, index()); });
}

ClassifyService::~ClassifyService() { stop(); }

bool ClassifyService::serves_ui_dir() const {
  return !impl_->ui_dir.empty() &&
         std::filesystem::is_regular_file(std::filesystem::path(impl_->ui_dir) / "index.html");
}

HttpReply ClassifyService::classify(const std::string& body) const {
  std::vector<std::string> rows;
  try {
    const auto doc = nlohmann::json::parse(body);
    if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array()) {
      return error_reply(400, "request must be a JSON object with a \"rows\" array");
    }
    for (const auto& r : doc["rows"]) {
      if (!r.is_string()) return error_reply(400, "every row must be a string");
      rows.push_back(r.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    return error_reply(400, std::string("invalid JSON: ") + e.what());
  }
  if (rows.size() != static_cast<std::size_t>(kBitmapSide)) {
    return error_reply(400, "expected 32 rows, got " + std::to_string(rows.size()));
  }
  try {
    const RawBitmap bitmap = bitmap_from_rows(rows);
    const Prediction p = ovr_predict(impl_->model, bitmap_features(impl_->model, bitmap));
    nlohmann::json out;
    out["label"] = p.label;
    out["scores"] = p.scores;
    return {200, out.dump(), "application/json"};
  } catch (const FormatError& e) {
    return error_reply(400, std::string("bitmap ") + e.what());
  } catch (const std::exception& e) {
    return error_reply(400, e.what());
  }
}

HttpReply ClassifyService::health() const {
  const OvrModel& m = impl_->model;
  nlohmann::ordered_json j;
  j["status"] = "ok";
  j["feature_kind"] = std::string(to_string(m.kind));
  j["kernel"] = {{"kind", std::string(to_string(m.kernel.kind))}, {"gamma", m.kernel.gamma}};
  j["c"] = m.params.c;
  j["support_vectors"] = m.support_vector_total();
  j["classes"] = m.models.size();
  j["dimension"] = m.dimension;
  return {200, j.dump(), "application/json"};
}

HttpReply ClassifyService::index() const {
  if (serves_ui_dir()) {
    std::ifstream in(std::filesystem::path(impl_->ui_dir) / "index.html", std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return {200, buf.str(), "text/html"};
  }
  return {200, kStubPage, "text/html"};
}

bool ClassifyService::bind(const std::string& host, int port) {
  return impl_->server.bind_to_port(host, port);
}

int ClassifyService::bind_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool ClassifyService::listen() { return impl_->server.listen_after_bind(); }

void ClassifyService::stop() {
  if (impl_) impl_->server.stop();
}

bool ClassifyService::running() const { return impl_->server.is_running(); }

}  // namespace digitsvm
