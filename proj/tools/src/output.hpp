#pragma once

// CSV and JSON emission for the bf tool. Numbers are written with 17
// significant digits through std::to_chars, so output does not depend on the
// process locale.

#include <iosfwd>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bf/types.hpp"

namespace bftool {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaId = "bf-output/1";

/// Shortest form that still carries 17 significant digits.
std::string format_number(double v);

/// JSON number when finite, otherwise the string "nan", "inf" or "-inf".
json jnum(double v);
json jcplx(bf::cplx z);

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void write_csv(std::ostream& os) const;
  /// Array of objects keyed by the header.
  json to_json() const;
};

/// stdout when path is empty; IoError when the file cannot be created.
class OutputSink {
 public:
  explicit OutputSink(const std::string& path);
  ~OutputSink();
  std::ostream& stream();

 private:
  std::unique_ptr<std::ostream> file_;
};

/// {"schema", "command", "config", "result", "error"}.
json envelope(const std::string& command, const json& config, const json& result,
              const json& error = nullptr);

}  // namespace bftool
