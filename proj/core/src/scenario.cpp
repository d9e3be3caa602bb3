#include "rbk/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "rbk/error.hpp"

namespace rbk {

using nlohmann::json;

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw Error(ErrorCode::ParseError, fmt::format("line {}: key '{}': {}", line_of(key), key, what));
  }

  // 1-based line of the first occurrence of "key" in the document.
  std::size_t line_of(const std::string& key) const {
    const std::size_t pos = text_.find("\"" + key + "\"");
    if (pos == std::string::npos) return 1;
    return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
  }

  void only(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) const {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [k, v] : obj.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
        fail(k, fmt::format("unknown key in {}", where));
    }
  }

  double number(const json& obj, const std::string& key) const {
    const json& v = obj.at(key);
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  double number_or(const json& obj, const std::string& key, double fallback) const {
    return obj.contains(key) ? number(obj, key) : fallback;
  }

  Point point_or(const json& obj, const std::string& key, const Point& fallback) const {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array() || v.empty() || v.size() > 2) fail(key, "expected an array of 1 or 2 numbers");
    Point p = Point::Zero();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(key, "expected numbers");
      p[static_cast<Eigen::Index>(i)] = v[i].get<double>();
    }
    return p;
  }

  std::string string(const json& obj, const std::string& key) const {
    const json& v = obj.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  Rational rational(const json& obj, const std::string& key) const {
    const json& v = obj.at(key);
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      std::int64_t num = 0, den = 1;
      char slash = 0;
      std::istringstream in(s);
      in >> num;
      if (!in) fail(key, "expected an integer or \"p/q\"");
      if (in >> slash) {
        if (slash != '/' || !(in >> den) || den == 0) fail(key, "expected an integer or \"p/q\"");
      }
      std::string rest;
      if (in >> rest) fail(key, "trailing characters in rational");
      return Rational(num, den);
    }
    fail(key, "expected an integer or \"p/q\"");
  }

 private:
  const std::string& text_;
};

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ValidationError, what); }

MomentPolytope parse_polytope(const Parser& ps, const json& j) {
  ps.only(j, "polytope", {"kind", "a", "b"});
  const std::string kind = ps.string(j, "kind");
  const Rational a = j.contains("a") ? ps.rational(j, "a") : Rational(1);
  const Rational b = j.contains("b") ? ps.rational(j, "b") : a;
  if (a <= 0 || b <= 0) invalid("polytope side lengths must be > 0");
  if (kind == "interval") return MomentPolytope::interval(a);
  if (kind == "rectangle") return MomentPolytope::rectangle(a, b);
  if (kind == "simplex") return MomentPolytope::simplex(a);
  ps.fail("kind", "unknown polytope kind '" + kind + "'");
}

SubvarietyDescriptor parse_subvariety(const Parser& ps, const json& j) {
  ps.only(j, "subvariety", {"kind", "axis"});
  SubvarietyDescriptor sub;
  const std::string kind = ps.string(j, "kind");
  if (kind == "ambient")
    sub.kind = SubvarietyKind::Ambient;
  else if (kind == "coordinate_curve")
    sub.kind = SubvarietyKind::CoordinateCurve;
  else if (kind == "diagonal_curve")
    sub.kind = SubvarietyKind::DiagonalCurve;
  else if (kind == "line_in_p2")
    sub.kind = SubvarietyKind::LineInP2;
  else
    ps.fail("kind", "unknown subvariety kind '" + kind + "'");
  if (j.contains("axis")) {
    if (!j.at("axis").is_number_integer()) ps.fail("axis", "expected an integer");
    sub.axis = j.at("axis").get<int>();
  }
  return sub;
}

PerturbationTerm parse_term(const Parser& ps, const json& j) {
  if (!j.is_object()) ps.fail("perturbation", "expected objects");
  const std::string kind = ps.string(j, "kind");
  if (kind == "constant") {
    ps.only(j, "constant term", {"kind", "value"});
    return ConstantTerm{ps.number(j, "value")};
  }
  if (kind == "affine") {
    ps.only(j, "affine term", {"kind", "slope"});
    return AffineTerm{ps.point_or(j, "slope", Point::Zero())};
  }
  if (kind == "quadratic") {
    ps.only(j, "quadratic term", {"kind", "scale"});
    return QuadraticTerm{ps.number_or(j, "scale", 1.0)};
  }
  if (kind == "bump") {
    ps.only(j, "bump term", {"kind", "amplitude", "center", "width"});
    GaussianBump b{ps.number_or(j, "amplitude", 1.0), ps.point_or(j, "center", Point::Zero()),
                   ps.number_or(j, "width", 1.0)};
    if (!(b.width > 0)) invalid("bump width must be > 0");
    return b;
  }
  if (kind == "tanh") {
    ps.only(j, "tanh term", {"kind", "amplitude", "direction"});
    return TanhTilt{ps.number_or(j, "amplitude", 0.1), ps.point_or(j, "direction", Point(1.0, 0.0))};
  }
  ps.fail("kind", "unknown perturbation kind '" + kind + "'");
}

WeightSymbol parse_weight(const Parser& ps, const json& j, const MomentPolytope& P) {
  ps.only(j, "weight", {"reference", "perturbation"});
  WeightSymbol w;
  const double a = static_cast<double>(P.a().numerator()) / static_cast<double>(P.a().denominator());
  const double b = static_cast<double>(P.b().numerator()) / static_cast<double>(P.b().denominator());
  const std::string ref = j.contains("reference") ? ps.string(j, "reference") : "canonical";
  if (ref == "canonical")
    w.reference = ReferenceSymbol::canonical(P);
  else if (ref == "fubini_study")
    w.reference = ReferenceSymbol::fubini_study(a);
  else if (ref == "product")
    w.reference = ReferenceSymbol::product(a, b);
  else if (ref == "simplex")
    w.reference = ReferenceSymbol::simplex(a);
  else
    ps.fail("reference", "unknown reference '" + ref + "'");
  if (j.contains("perturbation")) {
    const json& terms = j.at("perturbation");
    if (!terms.is_array()) ps.fail("perturbation", "expected an array");
    std::vector<PerturbationTerm> parsed;
    for (const json& t : terms) parsed.push_back(parse_term(ps, t));
    w.perturbation = Perturbation(std::move(parsed));
  }
  if (!w.perturbation.bounded()) invalid("weight perturbation must be bounded (no affine or quadratic terms)");
  return w;
}

bool filesystem_safe(const std::string& id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

}  // namespace

const std::vector<std::string>& known_outputs() {
  static const std::vector<std::string> k{"kernel", "envelope", "ma", "volume_report", "report"};
  return k;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw Error(ErrorCode::ParseError, fmt::format("line {}: malformed JSON", line));
  }
  const Parser ps(text);
  ps.only(doc, "scenario", {"id", "polytope", "subvariety", "weight", "grid", "m_list", "outputs", "seed"});

  Scenario s;
  for (const char* required : {"id", "polytope"})
    if (!doc.contains(required)) ps.fail(required, "missing required key");
  s.id = ps.string(doc, "id");
  if (!filesystem_safe(s.id)) invalid("id must be nonempty and use only [A-Za-z0-9_-]");
  s.polytope = parse_polytope(ps, doc.at("polytope"));

  s.subvariety = doc.contains("subvariety") ? parse_subvariety(ps, doc.at("subvariety")) : SubvarietyDescriptor{};
  s.subvariety.ambient = s.polytope;
  s.weight = doc.contains("weight") ? parse_weight(ps, doc.at("weight"), s.polytope)
                                    : parse_weight(ps, json::object(), s.polytope);

  double T = 12.0;
  int n = 257;
  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    ps.only(g, "grid", {"T", "n_per_axis"});
    T = ps.number_or(g, "T", T);
    if (g.contains("n_per_axis")) {
      if (!g.at("n_per_axis").is_number_integer()) ps.fail("n_per_axis", "expected an integer");
      n = g.at("n_per_axis").get<int>();
    }
  }
  s.grid = LogGrid::make(s.polytope.dim(), n, T);
  s.weight.halfwidth = T;

  if (doc.contains("m_list")) {
    const json& ml = doc.at("m_list");
    if (!ml.is_array()) ps.fail("m_list", "expected an array of integers");
    s.m_list.clear();
    for (const json& v : ml) {
      if (!v.is_number_integer()) ps.fail("m_list", "expected integers");
      s.m_list.push_back(v.get<int>());
    }
  }
  if (s.m_list.empty()) invalid("m_list must be nonempty");
  for (int m : s.m_list)
    if (m < 1) invalid("m >= 1 violated in m_list");
  for (std::size_t i = 1; i < s.m_list.size(); ++i)
    if (s.m_list[i] <= s.m_list[i - 1]) invalid("m_list must be strictly increasing");
  if (s.m_list.back() > 64) invalid("m_list entries must be <= 64");

  if (doc.contains("outputs")) {
    const json& o = doc.at("outputs");
    if (!o.is_array()) ps.fail("outputs", "expected an array of strings");
    for (const json& v : o) {
      if (!v.is_string()) ps.fail("outputs", "expected strings");
      const std::string tag = v.get<std::string>();
      const auto& k = known_outputs();
      if (std::find(k.begin(), k.end(), tag) == k.end()) invalid("unknown output tag '" + tag + "'");
      s.outputs.push_back(tag);
    }
  } else {
    s.outputs = known_outputs();
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) ps.fail("seed", "expected a nonnegative integer");
    s.seed = doc.at("seed").get<std::uint64_t>();
  }
  return s;
}

Model Scenario::model() const { return build_model(polytope, subvariety, weight, grid); }

bool Scenario::wants(const std::string& output) const {
  return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_scenario(buf.str());
}

std::vector<std::filesystem::path> scenario_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  if (ec) throw Error(ErrorCode::Io, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end());
  return out;
}

Scenario load_shipped(const std::filesystem::path& dir, const std::string& id) {
  return load_scenario(dir / (id + ".json"));
}

}  // namespace rbk
