#include "momtensor/tensor_io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "momtensor/error.hpp"

namespace momtensor {

namespace {

constexpr char kMagic[4] = {'T', 'N', 'S', 'R'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t take(std::size_t width) {
    if (bytes_.size() - pos_ < width) throw FormatError("binary tensor is truncated");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += width;
    return v;
  }

  std::string_view raw(std::size_t width) {
    if (bytes_.size() - pos_ < width) throw FormatError("binary tensor is truncated");
    auto s = bytes_.substr(pos_, width);
    pos_ += width;
    return s;
  }

  bool exhausted() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string tensor_to_json(const Tensor& t) {
  for (double v : t.data()) {
    if (!std::isfinite(v)) throw FormatError("tensor JSON cannot represent non-finite entries");
  }
  nlohmann::ordered_json j;
  j["order"] = t.order();
  j["extents"] = t.extents();
  j["layout"] = "row-major";
  j["data"] = std::vector<double>(t.data().begin(), t.data().end());
  return j.dump() + "\n";
}

Tensor tensor_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("tensor JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw FormatError("tensor JSON must be an object");
    if (j.contains("layout") && j.at("layout") != "row-major") {
      throw FormatError("tensor JSON: only row-major layout is supported");
    }
    auto extents = j.at("extents").get<Extents>();
    if (j.contains("order") && j.at("order").get<std::size_t>() != extents.size()) {
      throw FormatError("tensor JSON: order does not match extents");
    }
    auto data = j.at("data").get<std::vector<double>>();
    return Tensor(std::move(extents), std::move(data));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("tensor JSON: ") + e.what());
  } catch (const ShapeError& e) {
    throw FormatError(std::string("tensor JSON: ") + e.what());
  }
}

std::string tensor_to_binary(const Tensor& t) {
  std::string out(kMagic, sizeof kMagic);
  put_u32(out, kTensorBinaryVersion);
  put_u32(out, static_cast<std::uint32_t>(t.order()));
  for (std::size_t e : t.extents()) put_u64(out, e);
  out.reserve(out.size() + 8 * t.size());
  for (double v : t.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

Tensor tensor_from_binary(std::string_view bytes) {
  ByteReader in(bytes);
  if (in.raw(4) != std::string_view(kMagic, sizeof kMagic)) throw FormatError("binary tensor: bad magic");
  const auto version = in.take(4);
  if (version != kTensorBinaryVersion) {
    throw FormatError("binary tensor: unsupported version " + std::to_string(version));
  }
  const auto order = in.take(4);
  if (order > 64) throw FormatError("binary tensor: implausible order " + std::to_string(order));
  Extents extents(order);
  for (auto& e : extents) e = static_cast<std::size_t>(in.take(8));
  std::size_t count = 0;
  try {
    count = checked_entry_count(extents);
  } catch (const ShapeError& e) {
    throw FormatError(std::string("binary tensor: ") + e.what());
  }
  std::vector<double> data(count);
  for (auto& v : data) v = std::bit_cast<double>(in.take(8));
  if (!in.exhausted()) throw FormatError("binary tensor: trailing bytes");
  return Tensor(std::move(extents), std::move(data));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw FormatError("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw FormatError("cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

}  // namespace momtensor
