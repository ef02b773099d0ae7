#pragma once

// RFC-4180 reading and writing, plus number formatting that is stable
// byte-for-byte across runs.

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace toperf::csv {

struct Record {
  std::size_t line = 0;  // 1-based line on which the record starts
  std::vector<std::string> fields;
};

/// Parses the whole stream. Quoted fields may contain commas, doubled quotes
/// and line breaks. CRLF and LF line endings are both accepted. Blank lines
/// are skipped. Throws ValidationError (with `source` and line) on an
/// unterminated quote or stray characters after a closing quote.
std::vector<Record> read(std::istream& in, std::string_view source);

std::string escape(std::string_view field);

/// Shortest round-trip representation of a double.
std::string format_number(double value);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(&out) {}

  void comment(std::string_view text);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream* out_;
};

}  // namespace toperf::csv
