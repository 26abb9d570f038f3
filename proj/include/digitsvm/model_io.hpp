#pragma once

#include <string>

#include "digitsvm/multiclass.hpp"

namespace digitsvm {

// JSON persistence. Doubles are written in shortest round-trip form, so a
// reload reproduces every value bit for bit.
std::string binary_model_to_json(const BinaryModel& model);
BinaryModel binary_model_from_json(const std::string& text);

std::string ovr_model_to_json(const OvrModel& model);
// Throws std::runtime_error on malformed or inconsistent documents.
OvrModel ovr_model_from_json(const std::string& text);

void save_model(const OvrModel& model, const std::string& path);
OvrModel load_model(const std::string& path);

}  // namespace digitsvm
