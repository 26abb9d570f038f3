#include "digitsvm/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace digitsvm {

namespace {

using nlohmann::ordered_json;

constexpr const char* kFormat = "digitsvm-ovr";
constexpr int kVersion = 1;

ordered_json kernel_json(const KernelSpec& spec) {
  return {{"kind", std::string(to_string(spec.kind))}, {"gamma", spec.gamma}};
}

KernelSpec kernel_from(const nlohmann::json& j) {
  KernelSpec spec{kernel_kind_from_string(j.at("kind").get<std::string>()), j.at("gamma").get<double>()};
  spec.validate();
  return spec;
}

ordered_json binary_json(const BinaryModel& m) {
  ordered_json j;
  j["kernel"] = kernel_json(m.kernel);
  j["bias"] = m.bias;
  j["coeffs"] = m.coeffs;
  j["support_vectors"] = m.support_vectors;
  return j;
}

BinaryModel binary_from(const nlohmann::json& j) {
  BinaryModel m;
  m.kernel = kernel_from(j.at("kernel"));
  m.bias = j.at("bias").get<double>();
  m.coeffs = j.at("coeffs").get<std::vector<double>>();
  m.support_vectors = j.at("support_vectors").get<std::vector<FeatureVector>>();
  if (m.coeffs.size() != m.support_vectors.size()) {
    throw std::runtime_error("model has " + std::to_string(m.support_vectors.size()) +
                             " support vectors but " + std::to_string(m.coeffs.size()) + " coeffs");
  }
  check_uniform_dimension(m.support_vectors);
  return m;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed model document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("invalid model document: ") + e.what());
  }
}

}  // namespace

std::string binary_model_to_json(const BinaryModel& model) { return binary_json(model).dump(); }

BinaryModel binary_model_from_json(const std::string& text) {
  return guarded([&] { return binary_from(nlohmann::json::parse(text)); });
}

std::string ovr_model_to_json(const OvrModel& model) {
  ordered_json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["feature_kind"] = std::string(to_string(model.kind));
  j["dimension"] = model.dimension;
  j["scaling"] = {{"divisor", model.scaling.divisor}, {"log_compress", model.scaling.log_compress}};
  j["kernel"] = kernel_json(model.kernel);
  j["train"] = {{"c", model.params.c}, {"tol", model.params.tol}, {"max_passes", model.params.max_passes}};
  auto models = ordered_json::array();
  for (std::size_t k = 0; k < model.models.size(); ++k) {
    ordered_json entry;
    entry["class"] = k;
    entry.update(binary_json(model.models[k]));
    models.push_back(std::move(entry));
  }
  j["models"] = std::move(models);
  return j.dump() + "\n";
}

OvrModel ovr_model_from_json(const std::string& text) {
  return guarded([&] {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != kFormat) {
      throw std::runtime_error("not a digitsvm model document");
    }
    if (j.at("version").get<int>() != kVersion) {
      throw std::runtime_error("unsupported model version " + std::to_string(j.at("version").get<int>()));
    }
    OvrModel m;
    m.kind = feature_kind_from_string(j.at("feature_kind").get<std::string>());
    m.dimension = j.at("dimension").get<std::size_t>();
    m.scaling.divisor = j.at("scaling").at("divisor").get<double>();
    m.scaling.log_compress = j.at("scaling").at("log_compress").get<bool>();
    m.kernel = kernel_from(j.at("kernel"));
    m.params.c = j.at("train").at("c").get<double>();
    m.params.tol = j.at("train").at("tol").get<double>();
    m.params.max_passes = j.at("train").at("max_passes").get<std::size_t>();
    const auto& models = j.at("models");
    if (models.size() != kNumClasses) {
      throw std::runtime_error("model document must hold 10 class models, found " +
                               std::to_string(models.size()));
    }
    for (std::size_t k = 0; k < models.size(); ++k) {
      if (models[k].at("class").get<std::size_t>() != k) {
        throw std::runtime_error("class models out of order");
      }
      m.models.push_back(binary_from(models[k]));
      const std::size_t dim = m.models.back().dimension();
      if (dim != 0 && dim != m.dimension) {
        throw std::runtime_error("class " + std::to_string(k) + " support vectors have dimension " +
                                 std::to_string(dim));
      }
      if (!(m.models.back().kernel == m.kernel)) {
        throw std::runtime_error("class " + std::to_string(k) + " uses a different kernel");
      }
    }
    if (m.dimension != feature_dimension(m.kind)) {
      throw std::runtime_error("dimension does not match feature kind");
    }
    return m;
  });
}

void save_model(const OvrModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << ovr_model_to_json(model);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

OvrModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ovr_model_from_json(buf.str());
}

}  // namespace digitsvm
