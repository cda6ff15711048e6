#include "kacward/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

namespace kw {

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void dump_rec(const ReportJson& j, int indent, int depth, std::string& out) {
  const auto pad = [&](int d) {
    if (indent >= 0) {
      out += '\n';
      out.append(static_cast<std::size_t>(indent * d), ' ');
    }
  };
  switch (j.type()) {
    case ReportJson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        out += ReportJson(it.key()).dump();
        out += indent >= 0 ? ": " : ":";
        dump_rec(it.value(), indent, depth + 1, out);
      }
      pad(depth);
      out += '}';
      return;
    }
    case ReportJson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // numeric rows stay on one line
      bool flat = true;
      for (const auto& v : j) flat = flat && v.is_primitive();
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) pad(depth + 1);
        dump_rec(v, indent, depth + 1, out);
      }
      if (!flat) pad(depth);
      out += ']';
      return;
    }
    case ReportJson::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_report(const ReportJson& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  return out;
}

std::string fnv1a_digest(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ReportJson make_report(std::string_view command, std::string_view digest) {
  ReportJson r;
  r["schema"] = 1;
  r["command"] = std::string(command);
  r["inputs"]["digest"] = std::string(digest);
  return r;
}

}  // namespace kw
