#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "momtensor/tensor.hpp"

namespace momtensor {

inline constexpr std::uint32_t kTensorBinaryVersion = 1;

/// `{"order": u, "extents": [...], "layout": "row-major", "data": [...]}`.
/// Numbers are written in shortest round-trip form, so reading the text
/// back reproduces every double bit for bit.
std::string tensor_to_json(const Tensor& t);
Tensor tensor_from_json(std::string_view text);

/// Little-endian: "TNSR", u32 version, u32 order, u64 extents[order],
/// then the f64 payload in row-major order.
std::string tensor_to_binary(const Tensor& t);
Tensor tensor_from_binary(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

/// Writes through a sibling temporary file and renames it into place, so
/// readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace momtensor
