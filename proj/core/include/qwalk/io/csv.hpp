#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qwalk::io {

/// In-memory CSV with a header row. Reals are written in shortest round-trip form,
/// so identical inputs give byte-identical files.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  class Row {
   public:
    Row& operator<<(double value);
    Row& operator<<(int value);
    Row& operator<<(std::uint64_t value);
    Row& operator<<(std::string_view value);
    Row& operator<<(const char* value) { return *this << std::string_view(value); }
    Row& operator<<(bool value);

   private:
    friend class CsvTable;
    explicit Row(std::vector<std::string>& cells) : cells_(cells) {}
    std::vector<std::string>& cells_;
  };

  /// Appends an empty row; stream the cells into the returned handle.
  Row row();
  std::size_t size() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct OutputRecord {
  std::filesystem::path path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

std::string sha256_hex(std::string_view data);

/// Write `content` (creating parent directories) and fingerprint it.
OutputRecord write_output(const std::filesystem::path& path, std::string_view content);

}  // namespace qwalk::io
