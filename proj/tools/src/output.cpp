#include "output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "bf/error.hpp"

namespace bftool {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

json jnum(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json jcplx(bf::cplx z) { return json{{"re", jnum(z.real())}, {"im", jnum(z.imag())}}; }

namespace {

std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

void Table::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
}

json Table::to_json() const {
  json arr = json::array();
  for (const auto& row : rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < header.size() && i < row.size(); ++i) {
      const Cell& c = row[i];
      if (const auto* d = std::get_if<double>(&c))
        obj[header[i]] = jnum(*d);
      else if (const auto* n = std::get_if<long long>(&c))
        obj[header[i]] = *n;
      else
        obj[header[i]] = std::get<std::string>(c);
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

OutputSink::OutputSink(const std::string& path) {
  if (path.empty()) return;
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*f) throw bf::Error(bf::ErrorCode::IoError, "cannot open '" + path + "' for writing");
  file_ = std::move(f);
}

OutputSink::~OutputSink() {
  if (file_) file_->flush();
}

std::ostream& OutputSink::stream() { return file_ ? *file_ : std::cout; }

json envelope(const std::string& command, const json& config, const json& result,
              const json& error) {
  return json{{"schema", kSchemaId},
              {"command", command},
              {"config", config},
              {"result", result},
              {"error", error}};
}

}  // namespace bftool
