#include "momtensor/samples.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <utility>

#include "momtensor/error.hpp"

namespace momtensor {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::uint64_t parse_uint(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError(std::string("sample CSV: bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

std::map<std::string, std::string, std::less<>> parse_header(std::string_view line) {
  line = trim(line);
  if (line.empty() || line.front() != '#') throw FormatError("sample CSV: missing '# kind=...' header");
  line.remove_prefix(1);
  std::map<std::string, std::string, std::less<>> fields;
  while (true) {
    line = trim(line);
    if (line.empty()) break;
    const auto end = line.find_first_of(" \t");
    const std::string_view token = line.substr(0, end);
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) throw FormatError("sample CSV: malformed header token '" + std::string(token) + "'");
    fields.emplace(std::string(token.substr(0, eq)), std::string(token.substr(eq + 1)));
    if (end == std::string_view::npos) break;
    line.remove_prefix(end);
  }
  return fields;
}

}  // namespace

SampleSet::SampleSet(SampleKind kind, Extents shape, std::vector<double> flat, std::optional<std::uint64_t> seed)
    : kind_(kind), shape_(std::move(shape)), width_(1), flat_(std::move(flat)), seed_(seed) {
  for (std::size_t e : shape_) {
    if (e == 0) throw ShapeError("sample shape must be positive");
    width_ *= e;
  }
  if (flat_.empty()) throw ShapeError("sample set must not be empty");
  if (flat_.size() % width_ != 0) throw ShapeError("sample data is not a whole number of samples");
  for (double v : flat_) {
    if (!std::isfinite(v)) throw FormatError("sample set contains a non-finite entry");
  }
}

SampleSet SampleSet::vectors(std::size_t n, std::vector<double> flat, std::optional<std::uint64_t> seed) {
  return SampleSet(SampleKind::vector, {n}, std::move(flat), seed);
}

SampleSet SampleSet::matrices(std::size_t rows, std::size_t cols, std::vector<double> flat,
                              std::optional<std::uint64_t> seed) {
  return SampleSet(SampleKind::matrix, {rows, cols}, std::move(flat), seed);
}

Tensor SampleSet::sample_tensor(std::size_t i) const {
  const auto s = sample(i);
  return Tensor(shape_, std::vector<double>(s.begin(), s.end()));
}

std::string samples_to_csv(const SampleSet& samples) {
  std::string out;
  if (samples.kind() == SampleKind::vector) {
    out = "# kind=vector n=" + std::to_string(samples.shape()[0]);
  } else {
    out = "# kind=matrix m=" + std::to_string(samples.shape()[0]) + " n=" + std::to_string(samples.shape()[1]);
  }
  if (samples.seed()) out += " seed=" + std::to_string(*samples.seed());
  out += '\n';
  char buf[32];
  for (std::size_t i = 0; i < samples.count(); ++i) {
    const auto row = samples.sample(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out += ',';
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, row[j], std::chars_format::general, 17);
      out.append(buf, ptr);
    }
    out += '\n';
  }
  return out;
}

SampleSet samples_from_csv(std::string_view text) {
  const auto first_break = text.find('\n');
  const auto fields = parse_header(text.substr(0, first_break));
  std::string_view body = first_break == std::string_view::npos ? std::string_view{} : text.substr(first_break + 1);

  const auto kind_it = fields.find("kind");
  if (kind_it == fields.end()) throw FormatError("sample CSV: header lacks kind=");
  auto require = [&](const char* key) {
    const auto it = fields.find(key);
    if (it == fields.end()) throw FormatError(std::string("sample CSV: header lacks ") + key + "=");
    return parse_uint(it->second, key);
  };

  SampleKind kind;
  Extents shape;
  if (kind_it->second == "vector") {
    kind = SampleKind::vector;
    shape = {require("n")};
  } else if (kind_it->second == "matrix") {
    kind = SampleKind::matrix;
    shape = {require("m"), require("n")};
  } else {
    throw FormatError("sample CSV: unknown kind '" + kind_it->second + "'");
  }
  std::optional<std::uint64_t> seed;
  if (auto it = fields.find("seed"); it != fields.end()) seed = parse_uint(it->second, "seed");

  std::size_t width = 1;
  for (std::size_t e : shape) {
    if (e == 0) throw FormatError("sample CSV: zero extent in header");
    width *= e;
  }

  std::vector<double> flat;
  std::size_t line_no = 1;
  while (!body.empty()) {
    ++line_no;
    const auto brk = body.find('\n');
    const std::string_view line = trim(body.substr(0, brk));
    body = brk == std::string_view::npos ? std::string_view{} : body.substr(brk + 1);
    if (line.empty()) continue;
    std::size_t fields_in_row = 0;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view cell = trim(rest.substr(0, comma));
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw FormatError("sample CSV line " + std::to_string(line_no) + ": bad number '" + std::string(cell) + "'");
      }
      flat.push_back(v);
      ++fields_in_row;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields_in_row != width) {
      throw ShapeError("sample CSV line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                       " entries, found " + std::to_string(fields_in_row));
    }
  }
  if (flat.empty()) throw FormatError("sample CSV holds no samples");
  if (kind == SampleKind::vector) return SampleSet::vectors(shape[0], std::move(flat), seed);
  return SampleSet::matrices(shape[0], shape[1], std::move(flat), seed);
}

}  // namespace momtensor
