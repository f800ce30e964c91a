#include "unmask/io.hpp"

#include <array>
#include <charconv>
#include <numeric>
#include <sstream>

#include "unmask/error.hpp"
#include "unmask/rng.hpp"

namespace unmask {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    fail(ErrorCode::kParse, std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T field(const json& j, const char* key) {
  try {
    return require(j, key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, e.what());
  }
}

AffineCode rs_from_json(const json& spec) {
  const int q = field<int>(spec, "q");
  const int k = field<int>(spec, "k");
  std::vector<int> points;
  if (spec.contains("eval_points")) {
    points = field<std::vector<int>>(spec, "eval_points");
    if (spec.contains("n") && field<int>(spec, "n") != static_cast<int>(points.size()))
      fail(ErrorCode::kDimensionMismatch, "n differs from the number of evaluation points");
  } else {
    points.resize(field<int>(spec, "n"));
    std::iota(points.begin(), points.end(), 0);
  }
  const int n = static_cast<int>(points.size());
  if (spec.contains("shift") && spec.contains("seed"))
    fail(ErrorCode::kParse, "give either 'shift' or 'seed', not both");
  std::vector<int> shift(n, 0);
  if (spec.contains("shift")) {
    shift = field<std::vector<int>>(spec, "shift");
  } else if (spec.contains("seed")) {
    Rng rng(field<std::uint64_t>(spec, "seed"));
    for (auto& v : shift) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(q)));
  }
  return rs_code(q, k, points, shift);
}

}  // namespace

AffineCode code_from_json(const json& spec) {
  const auto kind = field<std::string>(spec, "kind");
  if (kind == "rs") return rs_from_json(spec);
  if (kind == "affine_code") {
    const auto generator = field<std::vector<std::vector<int>>>(spec, "generator");
    if (generator.empty()) fail(ErrorCode::kParse, "generator has no rows");
    const auto n = generator.front().size();
    auto shift = field_or<std::vector<int>>(spec, "shift", std::vector<int>(n, 0));
    return AffineCode(field<int>(spec, "q"), generator, std::move(shift));
  }
  fail(ErrorCode::kParse, "'" + kind + "' is not a code kind (expected rs or affine_code)");
}

JointPMF dist_from_json(const json& spec) {
  const auto kind = field<std::string>(spec, "kind");
  if (kind == "explicit")
    return JointPMF(field<int>(spec, "q"), field<int>(spec, "n"),
                    field<std::vector<double>>(spec, "pmf"));
  if (kind == "uniform") return uniform_dist(field<int>(spec, "q"), field<int>(spec, "n"));
  if (kind == "rs" || kind == "affine_code") return code_dist(code_from_json(spec));
  if (kind == "mixture") {
    ProductMixtureSpec mix;
    mix.weights = field<std::vector<double>>(spec, "weights");
    mix.components = field<std::vector<std::vector<std::vector<double>>>>(spec, "components");
    return product_mixture(mix);
  }
  if (kind == "elevated")
    return elevated_family(dist_from_json(require(spec, "base")),
                           code_from_json(require(spec, "code")));
  fail(ErrorCode::kParse, "unknown distribution kind '" + kind + "'");
}

JointPMF dist_from_text(const std::string& text) { return dist_from_json(parse_text(text)); }

json dist_to_json(const JointPMF& p) {
  return {{"kind", "explicit"},
          {"q", p.q()},
          {"n", p.n()},
          {"pmf", std::vector<double>(p.probs().begin(), p.probs().end())}};
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string curve_to_csv(const InfoCurve& z, const EntropyCurve* h) {
  const bool with_se = !z.z_stderr.empty();
  std::string out = with_se ? "j,Z_bits,H_bits,Z_stderr\n" : "j,Z_bits,H_bits\n";
  for (int j = 1; j <= z.n(); ++j) {
    out += std::to_string(j) + "," + format_double(z[j]) + ",";
    if (h) out += format_double(h->h[j]);
    if (with_se) out += "," + format_double(z.z_stderr[j - 1]);
    out += "\n";
  }
  return out;
}

json curve_to_json(const InfoCurve& z, const EntropyCurve* h) {
  json j{{"n", z.n()}, {"Z_bits", z.z}};
  if (h) {
    j["method"] = h->method == CurveMethod::kExact ? "exact" : "mc";
    j["H_bits"] = std::vector<double>(h->h.begin() + 1, h->h.end());
  }
  if (!z.z_stderr.empty()) j["Z_stderr"] = z.z_stderr;
  return j;
}

namespace {

double parse_double(const std::string& cell) {
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    fail(ErrorCode::kParse, "not a number: '" + cell + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) cells.push_back(cell);
  if (!line.empty() && line.back() == sep) cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

}  // namespace

InfoCurve curve_from_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const json j = parse_text(text);
    InfoCurve z;
    z.z = field<std::vector<double>>(j, "Z_bits");
    z.z_stderr = field_or<std::vector<double>>(j, "Z_stderr", {});
    if (z.z.empty()) fail(ErrorCode::kParse, "curve has no values");
    return z;
  }

  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kParse, "empty curve file");
  const auto header = split(trim(line), ',');
  int z_col = -1;
  int se_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "Z_bits") z_col = static_cast<int>(c);
    if (header[c] == "Z_stderr") se_col = static_cast<int>(c);
  }
  if (header.empty() || header[0] != "j" || z_col < 0)
    fail(ErrorCode::kParse, "curve CSV header must start with j and contain Z_bits");

  InfoCurve z;
  int expected = 1;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size())
      fail(ErrorCode::kParse, "row " + std::to_string(expected) + " has the wrong width");
    if (static_cast<int>(parse_double(cells[0])) != expected)
      fail(ErrorCode::kParse, "rows must be j = 1..n in order");
    z.z.push_back(parse_double(cells[z_col]));
    if (se_col >= 0) z.z_stderr.push_back(parse_double(cells[se_col]));
    ++expected;
  }
  if (z.z.empty()) fail(ErrorCode::kParse, "curve has no rows");
  return z;
}

json schedule_to_json(const Schedule& s) { return {{"steps", s.steps()}}; }

Schedule schedule_from_json(const json& j) {
  if (j.is_object() && j.contains("schedule")) return schedule_from_json(j.at("schedule"));
  return Schedule(field<std::vector<int>>(j, "steps"));
}

Schedule schedule_from_text(const std::string& text) {
  return schedule_from_json(parse_text(text));
}

Schedule schedule_from_list(const std::string& list) {
  std::vector<int> steps;
  for (const auto& cell : split(list, ',')) {
    const std::string t = trim(cell);
    int v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
      fail(ErrorCode::kParse, "bad step '" + cell + "'");
    steps.push_back(v);
  }
  return Schedule(std::move(steps));
}

json plan_to_json(const ScheduleReport& report) {
  json j{{"schedule", schedule_to_json(report.schedule)},
         {"predicted_kl_bits", report.predicted_kl},
         {"k", report.k()},
         {"source", source_name(report.source)}};
  if (!report.nodes.empty()) j["nodes"] = report.nodes;
  if (report.bound_licai) j["bound_licai_bits"] = *report.bound_licai;
  return j;
}

ScheduleReport plan_from_json(const json& j) {
  ScheduleReport r{schedule_from_json(require(j, "schedule")), field<double>(j, "predicted_kl_bits"),
                   std::nullopt, parse_source(field<std::string>(j, "source")),
                   field_or<std::vector<int>>(j, "nodes", {})};
  if (j.contains("bound_licai_bits")) r.bound_licai = field<double>(j, "bound_licai_bits");
  if (field<int>(j, "k") != r.schedule.k())
    fail(ErrorCode::kParse, "k disagrees with the schedule length");
  return r;
}

}  // namespace unmask
