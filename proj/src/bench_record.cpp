#include "sbf/bench_record.hpp"

#include <charconv>
#include <cstdio>
#include <system_error>

#include "sbf/image.hpp"

namespace sbf {
namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// Splits CSV text into records of fields (RFC 4180 quoting).
std::vector<std::vector<std::string>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw InvalidParameter("unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

double parse_double(const std::string& s, const char* column) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidParameter(std::string("bad numeric value in column ") + column +
                           ": '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const char* column) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw InvalidParameter(std::string("bad integer value in column ") + column +
                           ": '" + s + "'");
  return v;
}

}  // namespace

std::string bench_csv_header() {
  return "method,sigma_s,sigma_r,epsilon,T,N,M,retained_terms,wall_millis,"
         "mse_vs_direct";
}

std::string to_csv_row(const BenchRecord& r) {
  std::string out = quote(r.method);
  for (double v : {r.sigma_s, r.sigma_r, r.epsilon, r.T}) out += ',' + format_double(v);
  out += ',' + std::to_string(r.N);
  out += ',' + std::to_string(r.M);
  out += ',' + std::to_string(r.retained_terms);
  out += ',' + format_double(r.wall_millis);
  out += ',';
  if (r.mse_vs_direct) out += format_double(*r.mse_vs_direct);
  return out;
}

std::vector<BenchRecord> parse_bench_csv(std::string_view text) {
  const auto rows = split_csv(text);
  if (rows.empty()) throw InvalidParameter("CSV is empty");
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i)
    header += (i ? "," : "") + rows[0][i];
  if (header != bench_csv_header()) throw InvalidParameter("unexpected CSV header: " + header);

  std::vector<BenchRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != kBenchColumns)
      throw InvalidParameter("CSV row " + std::to_string(i) + " has " +
                             std::to_string(f.size()) + " fields");
    BenchRecord r;
    r.method = f[0];
    r.sigma_s = parse_double(f[1], "sigma_s");
    r.sigma_r = parse_double(f[2], "sigma_r");
    r.epsilon = parse_double(f[3], "epsilon");
    r.T = parse_double(f[4], "T");
    r.N = parse_int(f[5], "N");
    r.M = parse_int(f[6], "M");
    r.retained_terms = parse_int(f[7], "retained_terms");
    r.wall_millis = parse_double(f[8], "wall_millis");
    if (!f[9].empty()) r.mse_vs_direct = parse_double(f[9], "mse_vs_direct");
    out.push_back(std::move(r));
  }
  return out;
}

std::string to_human(const BenchRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s: sigma_s=%g sigma_r=%g eps=%g T=%g N=%d M=%d terms=%d "
                "time=%.2f ms",
                r.method.c_str(), r.sigma_s, r.sigma_r, r.epsilon, r.T, r.N, r.M,
                r.retained_terms, r.wall_millis);
  std::string out = buf;
  if (r.mse_vs_direct) {
    std::snprintf(buf, sizeof buf, " mse_vs_direct=%.6g", *r.mse_vs_direct);
    out += buf;
  }
  return out;
}

}  // namespace sbf
