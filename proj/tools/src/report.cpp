#include "causalbounds/cli/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>

#include "causalbounds/error.hpp"

namespace causalbounds::cli {

namespace {

Json point_json(const ParamPoint& p) {
  Json o = Json::object();
  for (const auto& [k, v] : p) o[k] = v;
  return o;
}

ParamPoint point_from(const Json& j, const char* field) {
  if (!j.is_object()) throw DataFormatError(std::string("'") + field + "' must be an object", 0);
  ParamPoint p;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw DataFormatError(std::string("'") + field + "." + k + "' must be a number", 0);
    p.emplace_back(k, v.get<double>());
  }
  return p;
}

const Json& field(const Json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw DataFormatError(std::string("bounds object lacks '") + name + "'", 0);
  return *it;
}

std::string number_text(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void quote(std::string& out, const std::string& s) {
  // Reuse the library's escaping for strings.
  out += Json(s).dump();
}

void emit(std::string& out, const Json& j, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        quote(out, k);
        out += ": ";
        emit(out, v, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += ",\n";
        out += pad;
        emit(out, j[k], depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += number_text(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string content_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json to_json(const BoundsResult& r) {
  Json j;
  j["kind"] = to_string(r.kind);
  j["lo"] = r.interval.lo();
  j["hi"] = r.interval.hi();
  j["argmin"] = r.argmin ? point_json(*r.argmin) : Json(nullptr);
  j["argmax"] = r.argmax ? point_json(*r.argmax) : Json(nullptr);
  j["components"] = point_json(r.components);
  Json d;
  d["method"] = r.diagnostics.method;
  d["evaluations"] = r.diagnostics.evaluations;
  d["constraint_violations"] = r.diagnostics.constraint_violations;
  d["notes"] = r.diagnostics.notes;
  j["diagnostics"] = std::move(d);
  return j;
}

BoundsResult bounds_from_json(const Json& j) {
  if (!j.is_object()) throw DataFormatError("bounds entry must be an object", 0);
  BoundsResult r;
  r.kind = identification_kind_from_string(field(j, "kind").get<std::string>());
  const auto& lo = field(j, "lo");
  const auto& hi = field(j, "hi");
  if (!lo.is_number() || !hi.is_number()) throw DataFormatError("'lo' and 'hi' must be numbers", 0);
  r.interval = Interval(lo.get<double>(), hi.get<double>());
  if (const auto& a = field(j, "argmin"); !a.is_null()) r.argmin = point_from(a, "argmin");
  if (const auto& a = field(j, "argmax"); !a.is_null()) r.argmax = point_from(a, "argmax");
  r.components = point_from(field(j, "components"), "components");
  const auto& d = field(j, "diagnostics");
  r.diagnostics.method = field(d, "method").get<std::string>();
  r.diagnostics.evaluations = field(d, "evaluations").get<std::uint64_t>();
  r.diagnostics.constraint_violations = field(d, "constraint_violations").get<std::uint64_t>();
  r.diagnostics.notes = field(d, "notes").get<std::vector<std::string>>();
  return r;
}

Json to_json(const RunReport& r) {
  Json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = r.command;
  Json inputs = Json::array();
  for (const auto& in : r.inputs) inputs.push_back(Json{{"name", in.name}, {"digest", in.digest}});
  j["inputs"] = std::move(inputs);
  Json results = Json::array();
  for (const auto& lr : r.results) {
    Json e;
    e["label"] = lr.label;
    const Json body = to_json(lr.result);
    for (const auto& [k, v] : body.items()) e[k] = v;
    results.push_back(std::move(e));
  }
  j["results"] = std::move(results);
  j["warnings"] = r.warnings;
  if (r.duration_ms) j["duration_ms"] = *r.duration_ms;
  return j;
}

std::string dump_json(const Json& j) {
  std::string out;
  emit(out, j, 0);
  out += "\n";
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.flush();
  if (!f) throw IoError("error writing " + path.string());
}

void emit_json(const RunReport& r, const std::filesystem::path& path) {
  write_text_file(path, dump_json(to_json(r)));
}

}  // namespace causalbounds::cli
