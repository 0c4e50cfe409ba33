#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "tlw/seqspace.hpp"
#include "tlw/weights.hpp"

namespace tlw {

using Json = nlohmann::ordered_json;

enum class Encoding { Binary, Csv };

/// Writes a JSON header at `header` and the values next to it
/// (`<stem>.f64` or `<stem>.csv`). `extra` keys are merged into the header.
void write_grid_function(const std::filesystem::path& header, const GridFunction& f,
                         Encoding encoding = Encoding::Binary, const Json& extra = Json::object());
void write_grid_function(const std::filesystem::path& header, const ComplexGridFunction& f,
                         Encoding encoding = Encoding::Binary, const Json& extra = Json::object());

/// IoError on a complex file.
GridFunction read_grid_function(const std::filesystem::path& header);
/// Real files are promoted.
ComplexGridFunction read_complex_grid_function(const std::filesystem::path& header);
Json read_header(const std::filesystem::path& header);

void write_coeff_field(const std::filesystem::path& header, const CoeffField& lambda);
CoeffField read_coeff_field(const std::filesystem::path& header);

/// Levels concatenated in increasing k, each a row-major grid array.
void write_weights(const std::filesystem::path& header, const WeightSequence& w,
                   const Json& extra = Json::object());
/// PositivityError if any stored value is not strictly positive.
WeightSequence read_weights(const std::filesystem::path& header);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace tlw
