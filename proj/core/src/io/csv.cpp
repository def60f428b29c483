#include "qwalk/io/csv.hpp"

#include <array>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "detail/text.hpp"

namespace qwalk::io {

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable::Row& CsvTable::Row::operator<<(double value) {
  cells_.push_back(text::format_double(value));
  return *this;
}

CsvTable::Row& CsvTable::Row::operator<<(int value) {
  cells_.push_back(std::to_string(value));
  return *this;
}

CsvTable::Row& CsvTable::Row::operator<<(std::uint64_t value) {
  cells_.push_back(std::to_string(value));
  return *this;
}

CsvTable::Row& CsvTable::Row::operator<<(std::string_view value) {
  cells_.emplace_back(value);
  return *this;
}

CsvTable::Row& CsvTable::Row::operator<<(bool value) {
  cells_.emplace_back(value ? "true" : "false");
  return *this;
}

CsvTable::Row CsvTable::row() {
  rows_.emplace_back();
  return Row(rows_.back());
}

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

OutputRecord write_output(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
  return {path, sha256_hex(content), content.size()};
}

}  // namespace qwalk::io
